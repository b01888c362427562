"""
Central hyperplane arrangements as ordered lists of canonical covectors,
with the intersection lattice L(A), flats keyed by A_X = {H : X <= H},
subarrangements, and essentialization.

A hyperplane is stored as its defining covector, scaled so the leftmost
nonzero coordinate is 1.  The arrangement orders hyperplanes by the fixed
lexicographic order on covector coefficient vectors; the NBC machinery in
`osalg` depends on this order, so it is part of the data model.
"""

from __future__ import annotations

from math import gcd

from .exactnum import Cyc, CycMatrix, cyc_from_json, cyc_to_json, kernel, rref

__all__ = [
    "Hyperplane",
    "Arrangement",
    "Flat",
    "IntersectionLattice",
    "canonicalize_hyperplane",
    "build_lattice",
    "subarrangement",
    "essentialize",
    "FlatNotInLatticeError",
]


class FlatNotInLatticeError(ValueError):
    pass


class Hyperplane:
    """A linear hyperplane ker(alpha) given by its canonical covector."""

    __slots__ = ("covector",)

    def __init__(self, covector):
        self.covector = tuple(covector)

    def __eq__(self, other):
        return isinstance(other, Hyperplane) and self.covector == other.covector

    def __hash__(self):
        return hash(self.covector)

    def __repr__(self):
        return "Hyperplane(%s)" % (", ".join(str(c) for c in self.covector),)


def canonicalize_hyperplane(raw) -> Hyperplane:
    """Scale a nonzero covector so its leftmost nonzero coordinate is 1."""
    vec = [Cyc._coerce(c) for c in raw]
    lead = next((c for c in vec if not c.is_zero()), None)
    if lead is None:
        raise ValueError("zero covector does not define a hyperplane")
    inv = lead.inverse()
    return Hyperplane(tuple(inv * c for c in vec))


class Arrangement:
    """An ordered, duplicate-free list of canonical hyperplanes in C^n."""

    def __init__(self, n: int, hyperplanes):
        hps = list(hyperplanes)
        m = 1
        for h in hps:
            for c in h.covector:
                m = m * c.m // gcd(m, c.m)
        lifted = [Hyperplane(tuple(c.lift(m) for c in h.covector)) for h in hps]
        # sort key uses the minimal-conductor canonical form of each entry so
        # the order does not depend on the ambient lcm conductor (otherwise a
        # subarrangement could reorder relative to its parent)
        keyed = sorted(set(lifted),
                       key=lambda h: tuple(c._canonical() for c in h.covector))
        if len(keyed) != len(lifted):
            raise ValueError("duplicate hyperplanes")
        self.n = n
        self.conductor = m
        self.hyperplanes = tuple(keyed)
        self._index = {h.covector: i for i, h in enumerate(self.hyperplanes)}
        self._lattice = None
        self._os = None  # cache slot used by osalg

    @staticmethod
    def from_covectors(n: int, raws) -> "Arrangement":
        return Arrangement(n, [canonicalize_hyperplane(r) for r in raws])

    def __len__(self):
        return len(self.hyperplanes)

    def covector(self, i: int):
        return self.hyperplanes[i].covector

    def index_of(self, hyperplane: Hyperplane):
        """Index of a canonical hyperplane, or None."""
        key = tuple(c.lift(self.conductor) for c in hyperplane.covector)
        return self._index.get(key)

    def rank(self) -> int:
        if not self.hyperplanes:
            return 0
        M = CycMatrix.from_rows([list(h.covector) for h in self.hyperplanes])
        _, _, r = rref(M)
        return r

    def to_json(self):
        return {
            "dim": self.n,
            "hyperplanes": [[cyc_to_json(c) for c in h.covector]
                            for h in self.hyperplanes],
        }

    @staticmethod
    def from_json(obj) -> "Arrangement":
        return Arrangement.from_covectors(
            int(obj["dim"]),
            [[cyc_from_json(c) for c in row] for row in obj["hyperplanes"]])

    def __repr__(self):
        return "Arrangement(n=%d, %d hyperplanes)" % (self.n, len(self.hyperplanes))


class Flat:
    """A lattice element X, identified by key = {i : X <= H_i}."""

    __slots__ = ("key", "basis", "codim")

    def __init__(self, key, basis: CycMatrix, codim: int):
        self.key = tuple(sorted(key))
        self.basis = basis  # rows span X
        self.codim = codim

    def __eq__(self, other):
        return isinstance(other, Flat) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def to_json(self):
        return {"key": list(self.key), "codim": self.codim}

    def __repr__(self):
        return "Flat(codim=%d, key=%s)" % (self.codim, self.key)


class IntersectionLattice:
    """Flats of A grouped by codimension, L(A)_0 ... L(A)_rk."""

    def __init__(self, levels):
        self.levels = [list(lv) for lv in levels]
        self.by_key = {f.key: f for lv in self.levels for f in lv}

    def all_flats(self):
        return [f for lv in self.levels for f in lv]

    def __len__(self):
        return len(self.by_key)


def _span_rows(A: Arrangement, indices):
    """Echelon rows of the covector span of the given hyperplanes."""
    if not indices:
        return []
    M = CycMatrix.from_rows([list(A.covector(i)) for i in indices])
    red, _, rank = rref(M)
    return red.row_list()[:rank]


def _reduce_against(rows, vec):
    """Reduce vec against echelon rows (pivot = first nonzero of each row)."""
    vec = list(vec)
    for row in rows:
        p = next(j for j, c in enumerate(row) if not c.is_zero())
        f = vec[p]
        if not f.is_zero():
            vec = [a - f * b for a, b in zip(vec, row)]
    return vec


def _closure_key(A: Arrangement, rows):
    """All hyperplane indices whose covector lies in the echelon row span."""
    out = []
    for i in range(len(A)):
        red = _reduce_against(rows, A.covector(i))
        if all(c.is_zero() for c in red):
            out.append(i)
    return tuple(out)


def _flat_from_rows(A: Arrangement, rows, key=None) -> Flat:
    if key is None:
        key = _closure_key(A, rows)
    space = kernel(CycMatrix.from_rows(rows)) if rows else \
        [[Cyc.one() if i == j else Cyc.zero() for i in range(A.n)] for j in range(A.n)]
    basis = CycMatrix.from_rows(space) if space else CycMatrix(0, A.n, [])
    return Flat(key, basis, len(rows))


def build_lattice(A: Arrangement) -> IntersectionLattice:
    """Breadth-first closure: intersect each codim-k flat with each
    hyperplane, dedupe by key, until codim rk A."""
    if A._lattice is not None:
        return A._lattice
    top = Flat(tuple(), CycMatrix.identity(A.n), 0)
    levels = [[top]]
    # (key, echelon rows) per flat at the current level
    current = {tuple(): []}
    while True:
        nxt = {}
        for key, rows in current.items():
            keyset = set(key)
            for i in range(len(A)):
                if i in keyset:
                    continue
                red = _reduce_against(rows, A.covector(i))
                lead = next((j for j, c in enumerate(red) if not c.is_zero()), None)
                if lead is None:
                    continue  # already contains this hyperplane (can't happen: key closed)
                inv = red[lead].inverse()
                newrows = rows + [[inv * c for c in red]]
                # re-echelon: eliminate the new pivot column from earlier rows
                fixed = []
                for row in rows:
                    f = row[lead]
                    if not f.is_zero():
                        row = [a - f * b for a, b in zip(row, newrows[-1])]
                    fixed.append(row)
                newrows = sorted(
                    fixed + [newrows[-1]],
                    key=lambda rw: next(j for j, c in enumerate(rw) if not c.is_zero()))
                newkey = _closure_key(A, newrows)
                if newkey not in nxt:
                    nxt[newkey] = newrows
        if not nxt:
            break
        levels.append([_flat_from_rows(A, rows, key)
                       for key, rows in sorted(nxt.items())])
        current = nxt
    lattice = IntersectionLattice(levels)
    A._lattice = lattice
    return lattice


def subarrangement(A: Arrangement, X: Flat) -> Arrangement:
    """A_X: the hyperplanes containing X, same ambient space and order."""
    lattice = build_lattice(A)
    if X.key not in lattice.by_key:
        raise FlatNotInLatticeError("flat %s not in L(A)" % (X.key,))
    return Arrangement(A.n, [A.hyperplanes[i] for i in X.key])


def essentialize(A: Arrangement):
    """Quotient by the center.  Returns (essential arrangement in C^rk,
    projection matrix rk x n with new_covector(P v) = old_covector(v))."""
    if not A.hyperplanes:
        return Arrangement(0, []), CycMatrix(0, A.n, [])
    M = CycMatrix.from_rows([list(h.covector) for h in A.hyperplanes])
    red, _, rank = rref(M)
    basis_rows = red.row_list()[:rank]
    proj = CycMatrix.from_rows(basis_rows)
    new_cov = []
    for h in A.hyperplanes:
        # coordinates of the covector in the echelon basis of the row space
        vec = list(h.covector)
        coords = []
        for row in basis_rows:
            p = next(j for j, c in enumerate(row) if not c.is_zero())
            f = vec[p]
            coords.append(f)
            if not f.is_zero():
                vec = [a - f * b for a, b in zip(vec, row)]
        assert all(c.is_zero() for c in vec)
        new_cov.append(coords)
    return Arrangement.from_covectors(rank, new_cov), proj
