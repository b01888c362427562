"""
The Orlik-Solomon algebra of an arrangement over Q.

Generators h_H, one per hyperplane, modulo the relations

    sum_{i=1}^m (-1)^i h_1 ... h_i^ ... h_m = 0

for every minimal dependent (circuit) set {h_1 < ... < h_m}.  Each graded
piece H^k carries the deterministic no-broken-circuit (NBC) monomial basis:
strictly increasing independent tuples containing no broken circuit (circuit
minus its least element).  Straightening rewrites an arbitrary monomial into
this basis; rewriting always replaces an index by a strictly smaller one, so
it terminates by lexicographic descent.

All coefficients are rational; cyclotomic arithmetic only enters through the
covector independence tests.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from .arrangement import Arrangement, build_lattice, subarrangement
from .exactnum import Rat, rat_to_str
from .groups import MatrixGroup, hyperplane_action

__all__ = [
    "NBCBasis",
    "OSElement",
    "BrieskornComponent",
    "circuits",
    "nbc_basis",
    "straighten",
    "action_matrix",
    "action_trace",
    "perm_trace",
    "closure_key",
    "apply_perm",
    "rank_of_elements",
    "euler_derivation",
    "brieskorn_components",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)


class NBCBasis:
    __slots__ = ("degree", "monomials", "position")

    def __init__(self, degree, monomials):
        self.degree = degree
        self.monomials = tuple(monomials)
        self.position = {m: i for i, m in enumerate(self.monomials)}

    def __len__(self):
        return len(self.monomials)


class OSElement:
    """Degree-homogeneous element in NBC coordinates (sparse)."""

    __slots__ = ("k", "coeffs")

    def __init__(self, k, coeffs):
        self.k = k
        self.coeffs = {m: c for m, c in coeffs.items() if c}

    def is_zero(self):
        return not self.coeffs

    def __add__(self, other):
        assert self.k == other.k
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = out.get(m, _ZERO) + c
        return OSElement(self.k, out)

    def __sub__(self, other):
        assert self.k == other.k
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = out.get(m, _ZERO) - c
        return OSElement(self.k, out)

    def scale(self, f):
        f = Fraction(f)
        return OSElement(self.k, {m: f * c for m, c in self.coeffs.items()})

    def __eq__(self, other):
        return isinstance(other, OSElement) and (self.k, self.coeffs) == (other.k, other.coeffs)

    def __hash__(self):
        return hash((self.k, tuple(sorted(self.coeffs.items()))))

    def to_json(self):
        return {"k": self.k,
                "terms": [{"mono": list(m), "coef": rat_to_str(c)}
                          for m, c in sorted(self.coeffs.items())]}

    def __repr__(self):
        if not self.coeffs:
            return "OSElement(%d, 0)" % self.k
        return "OSElement(%d, %s)" % (
            self.k, " + ".join("%s*h%s" % (c, list(m))
                               for m, c in sorted(self.coeffs.items())))


class BrieskornComponent:
    __slots__ = ("flat", "degree", "spanning")

    def __init__(self, flat, degree, spanning):
        self.flat = flat
        self.degree = degree
        self.spanning = spanning  # dict: monomial tuple -> OSElement

    def dimension(self):
        return _rank_of_elements(list(self.spanning.values()))


class _OSContext:
    """Per-arrangement cache: independence data, circuits, NBC bases,
    straightening results and trace tables."""

    def __init__(self, A: Arrangement):
        self.A = A
        self.rank = A.rank()
        self._echelon = {(): []}
        self.circuits = None
        self.broken = None          # frozenset(B) -> circuit tuple C
        self.broken_by_max = None   # j -> list of frozenset(B) with max(B) = j
        self.nbc = {}
        self.memo = {}              # sorted tuple -> {nbc tuple: Fraction}
        self.traces = {}            # (k, perm) -> Fraction
        self.flat_key = {}          # sorted independent tuple -> closure key

    # -- matroid layer -----------------------------------------------------

    def echelon(self, mono):
        """Echelon rows of the covector span of a sorted tuple; None if
        dependent.  Cached on sorted prefixes."""
        got = self._echelon.get(mono)
        if got is not None or mono in self._echelon:
            return got
        prev = self.echelon(mono[:-1])
        if prev is None:
            self._echelon[mono] = None
            return None
        vec = list(self.A.covector(mono[-1]))
        for row in prev:
            p = next(j for j, c in enumerate(row) if not c.is_zero())
            f = vec[p]
            if not f.is_zero():
                vec = [a - f * b for a, b in zip(vec, row)]
        lead = next((j for j, c in enumerate(vec) if not c.is_zero()), None)
        if lead is None:
            out = None
        else:
            inv = vec[lead].inverse()
            out = prev + [[inv * c for c in vec]]
        self._echelon[mono] = out
        return out

    def independent(self, mono):
        return self.echelon(tuple(sorted(mono))) is not None

    def closure_key(self, mono):
        """Hyperplane indices in the span of the tuple's covectors."""
        mono = tuple(sorted(mono))
        got = self.flat_key.get(mono)
        if got is not None:
            return got
        rows = self.echelon(mono)
        assert rows is not None
        key = []
        for i in range(len(self.A)):
            vec = list(self.A.covector(i))
            for row in rows:
                p = next(j for j, c in enumerate(row) if not c.is_zero())
                f = vec[p]
                if not f.is_zero():
                    vec = [a - f * b for a, b in zip(vec, row)]
            if all(c.is_zero() for c in vec):
                key.append(i)
        key = tuple(key)
        self.flat_key[mono] = key
        return key

    def build_circuits(self):
        """Enumerate circuits: minimal dependent subsets.  BFS over
        independent sets; a dependent extension whose proper subsets are all
        independent is a circuit."""
        if self.circuits is not None:
            return
        nh = len(self.A)
        circuits = []
        indep = {()}
        level = [()]
        for size in range(self.rank + 1):
            nxt = []
            for mono in level:
                start = mono[-1] + 1 if mono else 0
                for j in range(start, nh):
                    cand = mono + (j,)
                    if self.echelon(cand) is not None:
                        indep.add(cand)
                        nxt.append(cand)
                    else:
                        subs = [cand[:i] + cand[i + 1:] for i in range(len(cand))]
                        if all(s in indep for s in subs):
                            circuits.append(cand)
            level = nxt
        circuits.sort()
        self.circuits = circuits
        self.broken = {}
        self.broken_by_max = {}
        for C in circuits:
            B = C[1:]
            fs = frozenset(B)
            if fs not in self.broken:
                self.broken[fs] = C
                self.broken_by_max.setdefault(B[-1], []).append(fs)

    # -- NBC basis ----------------------------------------------------------

    def nbc_monomials(self, k):
        got = self.nbc.get(k)
        if got is not None:
            return got
        self.build_circuits()
        nh = len(self.A)
        out = []

        def extend(mono):
            if len(mono) == k:
                out.append(mono)
                return
            start = mono[-1] + 1 if mono else 0
            for j in range(start, nh):
                cand = mono + (j,)
                if self.echelon(cand) is None:
                    continue
                if self._new_broken(cand, j):
                    continue
                extend(cand)

        if 0 <= k <= self.rank:
            extend(())
        basis = NBCBasis(k, out)
        self.nbc[k] = basis
        return basis

    def _new_broken(self, cand, j):
        cs = set(cand)
        for fs in self.broken_by_max.get(j, ()):
            if fs <= cs:
                return True
        return False

    # -- straightening -------------------------------------------------------

    def straighten_sorted(self, mono):
        """Image of a strictly increasing tuple, as {nbc tuple: coeff}."""
        got = self.memo.get(mono)
        if got is not None:
            return got
        if self.echelon(mono) is None:
            out = {}
        else:
            self.build_circuits()
            B = self._least_broken(mono)
            if B is None:
                out = {mono: _ONE}
            else:
                C = self.broken[frozenset(B)]
                rest = tuple(i for i in mono if i not in B)
                # relation solved for the broken-circuit monomial:
                # e_B = sum_{i>=1} (-1)^{i+1} e_{C \ {c_i}}
                sgn_split = _merge_sign(B, rest)
                out = {}
                for i in range(1, len(C)):
                    piece = C[:i] + C[i + 1:]
                    term_sign = _ONE if i % 2 == 1 else -_ONE
                    merged, msign = _sort_merge(piece, rest)
                    sub = self.straighten_sorted(merged)
                    f = sgn_split * term_sign * msign
                    for mm, cc in sub.items():
                        out[mm] = out.get(mm, _ZERO) + f * cc
                out = {mm: cc for mm, cc in out.items() if cc}
        self.memo[mono] = out
        return out

    def _least_broken(self, mono):
        best = None
        for size in range(2, len(mono) + 1):
            for sub in combinations(mono, size):
                if frozenset(sub) in self.broken:
                    if best is None or sub < best:
                        best = sub
        return best

    # -- traces ---------------------------------------------------------------

    def trace(self, k, perm):
        got = self.traces.get((k, perm))
        if got is not None:
            return got
        basis = self.nbc_monomials(k)
        total = _ZERO
        for mono in basis.monomials:
            img = tuple(perm[i] for i in mono)
            srt, sign = _sort_with_sign(img)
            if srt is None:
                continue
            coeff = self.straighten_sorted(srt).get(mono)
            if coeff:
                total += sign * coeff
        self.traces[(k, perm)] = total
        return total


def _merge_sign(B, rest):
    """Sign of sorting the concatenation (B, rest) of disjoint sorted tuples."""
    inv = 0
    for b in B:
        for r in rest:
            if r < b:
                inv += 1
    return _ONE if inv % 2 == 0 else -_ONE


def _sort_merge(a, b):
    """Merge two disjoint sorted tuples, tracking the permutation sign of
    sorting their concatenation."""
    merged = tuple(sorted(a + b))
    inv = 0
    for x in a:
        for y in b:
            if y < x:
                inv += 1
    return merged, (_ONE if inv % 2 == 0 else -_ONE)


def _sort_with_sign(mono):
    """(sorted tuple, sign) or (None, 0) on repeated index."""
    lst = list(mono)
    n = len(lst)
    sign = 1
    # insertion sort, counting swaps
    for i in range(1, n):
        j = i
        while j > 0 and lst[j - 1] > lst[j]:
            lst[j - 1], lst[j] = lst[j], lst[j - 1]
            sign = -sign
            j -= 1
    for i in range(1, n):
        if lst[i - 1] == lst[i]:
            return None, 0
    return tuple(lst), (_ONE if sign == 1 else -_ONE)


def _ctx(A: Arrangement) -> _OSContext:
    if A._os is None:
        A._os = _OSContext(A)
    return A._os


def circuits(A: Arrangement):
    ctx = _ctx(A)
    ctx.build_circuits()
    return list(ctx.circuits)


def nbc_basis(A: Arrangement, k: int) -> NBCBasis:
    if not (0 <= k <= _ctx(A).rank):
        raise ValueError("degree %d out of range 0..%d" % (k, _ctx(A).rank))
    return _ctx(A).nbc_monomials(k)


def straighten(A: Arrangement, mono) -> OSElement:
    """Image of an arbitrary monomial h_{i1}...h_{ik} in the NBC basis."""
    mono = tuple(mono)
    srt, sign = _sort_with_sign(mono)
    if srt is None:
        return OSElement(len(mono), {})
    ctx = _ctx(A)
    red = ctx.straighten_sorted(srt)
    return OSElement(len(mono), {m: sign * c for m, c in red.items()})


def action_matrix(A: Arrangement, G: MatrixGroup, g: int, k: int):
    """Matrix of g on NBCBasis(k): column j is straighten(g . monomial_j).
    Returned as a dense list of rows of Fractions."""
    perm = hyperplane_action(G, A).perms[g]
    basis = nbc_basis(A, k)
    n = len(basis)
    cols = []
    for mono in basis.monomials:
        img = straighten(A, tuple(perm[i] for i in mono))
        cols.append(img)
    rows = [[_ZERO] * n for _ in range(n)]
    for j, img in enumerate(cols):
        for m, c in img.coeffs.items():
            rows[basis.position[m]][j] = c
    return rows


def action_trace(A: Arrangement, G: MatrixGroup, g: int, k: int) -> Fraction:
    perm = hyperplane_action(G, A).perms[g]
    return _ctx(A).trace(k, perm)


def perm_trace(A: Arrangement, perm, k: int) -> Fraction:
    """Trace on NBCBasis(k) of the map induced by a hyperplane permutation."""
    return _ctx(A).trace(k, tuple(perm))


def closure_key(A: Arrangement, mono):
    """Flat key (all hyperplanes containing the intersection) of an
    independent monomial."""
    ctx = _ctx(A)
    if ctx.echelon(tuple(sorted(mono))) is None:
        raise ValueError("monomial %s is dependent" % (mono,))
    return ctx.closure_key(tuple(sorted(mono)))


def apply_perm(A: Arrangement, perm, x: OSElement) -> OSElement:
    """Image of an OSElement under a hyperplane permutation."""
    out = OSElement(x.k, {})
    for m, c in x.coeffs.items():
        img = straighten(A, tuple(perm[i] for i in m))
        out = out + img.scale(c)
    return out


def euler_derivation(A: Arrangement, x: OSElement) -> OSElement:
    """The degree -1 derivation d(h_1...h_k) = sum_i (-1)^{i-1}
    h_1...h_i^...h_k, extended linearly and straightened."""
    if x.k < 1:
        raise ValueError("euler_derivation needs degree >= 1")
    out = OSElement(x.k - 1, {})
    for m, c in x.coeffs.items():
        for i in range(len(m)):
            sign = _ONE if i % 2 == 0 else -_ONE
            term = straighten(A, m[:i] + m[i + 1:])
            out = out + term.scale(sign * c)
    return out


def brieskorn_components(A: Arrangement, k: int):
    """One component per codim-k flat X: the span of all increasing
    independent k-tuples with intersection exactly X."""
    ctx = _ctx(A)
    if not (0 <= k <= ctx.rank):
        raise ValueError("degree out of range")
    lattice = build_lattice(A)
    comps = {f.key: {} for f in lattice.levels[k]} if k < len(lattice.levels) else {}
    nh = len(A)
    for mono in combinations(range(nh), k):
        if ctx.echelon(mono) is None:
            continue
        key = ctx.closure_key(mono)
        comps[key][mono] = straighten(A, mono)
    out = []
    for f in (lattice.levels[k] if k < len(lattice.levels) else []):
        out.append(BrieskornComponent(f, k, comps[f.key]))
    return out


def _rank_of_elements(elements):
    """Rank of a list of OSElements of equal degree (Gaussian elimination on
    sparse rational vectors)."""
    rows = []
    for el in elements:
        vec = dict(el.coeffs)
        for pivot_key, pivot_vec in rows:
            f = vec.get(pivot_key)
            if f:
                for m, c in pivot_vec.items():
                    vec[m] = vec.get(m, _ZERO) - f * c
        vec = {m: c for m, c in vec.items() if c}
        if vec:
            pk = min(vec)
            pv = {m: c / vec[pk] for m, c in vec.items()}
            rows.append((pk, pv))
    return len(rows)


def rank_of_elements(elements):
    return _rank_of_elements(elements)
