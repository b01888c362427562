"""Exact-arithmetic engine for graded isotypic components of
arrangement-complement cohomology under finite complex reflection groups."""

__version__ = "0.1.0"
