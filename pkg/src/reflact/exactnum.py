"""
Exact arithmetic over Q and the cyclotomic fields Q(zeta_m), together with
exact dense linear algebra (row reduction, rank, kernel).

Rationals are `fractions.Fraction` (aliased `Rat`).  A cyclotomic number is a
`Cyc`: a conductor m together with the unique reduced coefficient vector of
length phi(m) representing the element in the power basis
1, zeta_m, ..., zeta_m^{phi(m)-1} of Q[x]/Phi_m(x).  Binary operations on
mixed conductors lift both operands to the lcm.  Conductors stay small here
(m <= 60), so the dense representation is the simplest correct canonical
form.

>>> z = Cyc.root_of_unity(3, 1)
>>> (1 + z) * (1 + z * z)
Cyc(1, (Fraction(1, 1),))
>>> Cyc.root_of_unity(4, 1) ** 2 == -1
True
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd

__all__ = [
    "Rat",
    "Cyc",
    "CycMatrix",
    "euler_phi",
    "cyclotomic_polynomial",
    "cyc_normalize",
    "cyc_arith",
    "rref",
    "kernel",
    "rat_to_str",
    "rat_from_str",
    "cyc_to_json",
    "cyc_from_json",
]

Rat = Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


@lru_cache(maxsize=None)
def euler_phi(m: int) -> int:
    assert m >= 1
    return sum(1 for k in range(1, m + 1) if gcd(k, m) == 1)


def _divisors(m: int) -> list[int]:
    return [d for d in range(1, m + 1) if m % d == 0]


def _poly_divmod(num: list[Fraction], den: list[Fraction]):
    # plain long division, den monic-ish (nonzero lead), coeffs low -> high
    num = list(num)
    dn = len(den) - 1
    lead = den[dn]
    quot = [_ZERO] * max(0, len(num) - dn)
    for i in range(len(num) - 1, dn - 1, -1):
        c = num[i] / lead
        if c:
            quot[i - dn] = c
            for j in range(dn + 1):
                num[i - dn + j] -= c * den[j]
    while num and not num[-1]:
        num.pop()
    return quot, num


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[Fraction, ...]:
    """Coefficients of Phi_m, low to high, computed by exact division of
    x^m - 1 by the lower cyclotomic polynomials."""
    num = [_ZERO] * (m + 1)
    num[0] = Fraction(-1)
    num[m] = _ONE
    for d in _divisors(m):
        if d == m:
            continue
        quot, rem = _poly_divmod(num, list(cyclotomic_polynomial(d)))
        assert not rem
        num = quot
    assert len(num) == euler_phi(m) + 1
    return tuple(num)


@lru_cache(maxsize=None)
def _reduction_table(m: int) -> tuple[tuple[Fraction, ...], ...]:
    """x^e mod Phi_m for phi(m) <= e < m, as coefficient tuples of length phi(m)."""
    phi = euler_phi(m)
    poly = cyclotomic_polynomial(m)
    # x^phi = -(poly[0] + ... + poly[phi-1] x^{phi-1})
    cur = [-c for c in poly[:phi]]
    rows = [tuple(cur)]
    for _ in range(phi + 1, m):
        top = cur[phi - 1]
        nxt = [_ZERO] + cur[: phi - 1]
        if top:
            for j in range(phi):
                nxt[j] -= top * poly[j]
        cur = nxt
        rows.append(tuple(cur))
    return tuple(rows)


def _reduce_coeffs(m: int, raw) -> tuple[Fraction, ...]:
    """Fold exponents mod m, then reduce mod Phi_m; returns length phi(m)."""
    phi = euler_phi(m)
    acc = [_ZERO] * m
    for e, c in enumerate(raw):
        if c:
            acc[e % m] += c
    if m == 1:
        return (acc[0],)
    table = _reduction_table(m)
    out = acc[:phi]
    for e in range(phi, m):
        c = acc[e]
        if c:
            row = table[e - phi]
            for j in range(phi):
                out[j] += c * row[j]
    return tuple(out)


@lru_cache(maxsize=None)
def _subfield_solver(m: int, d: int):
    """Row-reduced data for deciding membership of Q(zeta_m)-elements in the
    image of Q(zeta_d), d | m, and pulling coefficients back."""
    phi_m, phi_d = euler_phi(m), euler_phi(d)
    k = m // d
    cols = [_reduce_coeffs(m, [_ZERO] * (k * j) + [_ONE]) for j in range(phi_d)]
    # solve by Gaussian elimination on the phi_m x phi_d system once,
    # returning (row-echelon rows over the augmented identity, pivot rows)
    rows = [[cols[j][i] for j in range(phi_d)] for i in range(phi_m)]
    return rows


def _descend(m: int, d: int, coeffs):
    """Coefficients over Q(zeta_d) if the element lies in that subfield, else None."""
    rows = [list(r) for r in _subfield_solver(m, d)]
    phi_d = euler_phi(d)
    rhs = list(coeffs)
    # forward elimination with partial bookkeeping
    sol = [_ZERO] * phi_d
    used = [False] * len(rows)
    for col in range(phi_d):
        piv = None
        for i, row in enumerate(rows):
            if not used[i] and row[col]:
                piv = i
                break
        if piv is None:
            continue
        used[piv] = True
        inv = rows[piv][col]
        for i, row in enumerate(rows):
            if i != piv and row[col]:
                f = row[col] / inv
                for j in range(col, phi_d):
                    row[j] -= f * rows[piv][j]
                rhs[i] -= f * rhs[piv]
        sol[col] = None  # placeholder, resolved below
        sol[col] = piv
    # back-substitute: each pivot row now has a single nonzero column
    out = [_ZERO] * phi_d
    for col in range(phi_d):
        piv = sol[col]
        if isinstance(piv, int) and used[piv]:
            out[col] = rhs[piv] / rows[piv][col]
    # verify (also covers non-pivot rows, i.e. inconsistency)
    check = [_ZERO] * euler_phi(m)
    k = m // d
    for j, c in enumerate(out):
        if c:
            red = _reduce_coeffs(m, [_ZERO] * (k * j) + [c])
            check = [a + b for a, b in zip(check, red)]
    if tuple(check) != tuple(coeffs):
        return None
    return tuple(out)


class Cyc:
    """An element of Q(zeta_m) in reduced power-basis form.  Immutable."""

    __slots__ = ("m", "c", "_hash")

    def __init__(self, m: int, coeffs):
        coeffs = tuple(coeffs)
        assert len(coeffs) == euler_phi(m)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "c", coeffs)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *a):
        raise AttributeError("Cyc is immutable")

    # -- constructors -----------------------------------------------------

    @staticmethod
    def rational(q) -> "Cyc":
        return Cyc(1, (Fraction(q),))

    @staticmethod
    def zero() -> "Cyc":
        return _CYC_ZERO

    @staticmethod
    def one() -> "Cyc":
        return _CYC_ONE

    @staticmethod
    def root_of_unity(m: int, k: int = 1) -> "Cyc":
        raw = [_ZERO] * (k % m if m > 1 else 0) + [_ONE]
        return Cyc(m, _reduce_coeffs(m, raw))

    # -- basic queries -----------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.c)

    def is_rational(self) -> bool:
        return not any(self.c[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not a rational value: %r" % (self,))
        return self.c[0]

    def is_integer(self) -> bool:
        return self.is_rational() and self.c[0].denominator == 1

    def lift(self, mm: int) -> "Cyc":
        """Re-embed into Q(zeta_mm) for m | mm."""
        if mm == self.m:
            return self
        assert mm % self.m == 0
        k = mm // self.m
        raw = [_ZERO] * (euler_phi(self.m) * k)
        for j, c in enumerate(self.c):
            raw[k * j] = c
        return Cyc(mm, _reduce_coeffs(mm, raw))

    def conjugate(self) -> "Cyc":
        """Complex conjugation zeta_m -> zeta_m^{-1}."""
        m = self.m
        raw = [_ZERO] * m
        for j, c in enumerate(self.c):
            raw[(-j) % m] += c
        return Cyc(m, _reduce_coeffs(m, raw))

    def _canonical(self):
        """(d, coeffs) over the minimal cyclotomic subfield; used for hashing
        so that equal values at different conductors hash alike."""
        for d in _divisors(self.m):
            if d == self.m:
                return (d, self.c)
            down = _descend(self.m, d, self.c)
            if down is not None:
                return (d, down)
        return (self.m, self.c)

    # -- arithmetic --------------------------------------------------------

    @staticmethod
    def _coerce(x) -> "Cyc":
        if isinstance(x, Cyc):
            return x
        if isinstance(x, (int, Fraction)):
            return Cyc(1, (Fraction(x),))
        return NotImplemented

    def _common(self, other):
        a, b = self, other
        if a.m == b.m:
            return a, b
        mm = a.m * b.m // gcd(a.m, b.m)
        return a.lift(mm), b.lift(mm)

    def __add__(self, other):
        other = Cyc._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self._common(other)
        return Cyc(a.m, tuple(x + y for x, y in zip(a.c, b.c)))

    __radd__ = __add__

    def __neg__(self):
        return Cyc(self.m, tuple(-x for x in self.c))

    def __sub__(self, other):
        other = Cyc._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self._common(other)
        return Cyc(a.m, tuple(x - y for x, y in zip(a.c, b.c)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = Cyc._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self._common(other)
        if a.m == 1:
            return Cyc(1, (a.c[0] * b.c[0],))
        n = len(a.c)
        conv = [_ZERO] * (2 * n - 1)
        for i, x in enumerate(a.c):
            if x:
                for j, y in enumerate(b.c):
                    if y:
                        conv[i + j] += x * y
        return Cyc(a.m, _reduce_coeffs(a.m, conv))

    __rmul__ = __mul__

    def inverse(self) -> "Cyc":
        if self.is_zero():
            raise ZeroDivisionError("division by zero Cyc")
        if self.is_rational():
            return Cyc(self.m, (1 / self.c[0],) + self.c[1:])
        m = self.m
        phi = euler_phi(m)
        # solve (mult-by-self matrix) y = e_0
        cols = []
        for j in range(phi):
            basis = Cyc(m, tuple(_ONE if i == j else _ZERO for i in range(phi)))
            cols.append((self * basis).c)
        rows = [[cols[j][i] for j in range(phi)] for i in range(phi)]
        rhs = [_ONE] + [_ZERO] * (phi - 1)
        sol = _solve_square(rows, rhs)
        if sol is None:
            raise ZeroDivisionError("non-invertible Cyc (engine bug)")
        return Cyc(m, tuple(sol))

    def __truediv__(self, other):
        other = Cyc._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return Cyc._coerce(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = _CYC_ONE
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    # -- comparison / hashing ----------------------------------------------

    def __eq__(self, other):
        other = Cyc._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.m == other.m:
            return self.c == other.c
        a, b = self._common(other)
        return a.c == b.c

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash(self._canonical())
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self):
        return "Cyc(%d, %r)" % (self.m, self.c)

    def __str__(self):
        if self.is_rational():
            return rat_to_str(self.c[0])
        parts = []
        for j, c in enumerate(self.c):
            if not c:
                continue
            if j == 0:
                parts.append(rat_to_str(c))
            else:
                z = "z%d" % self.m + ("^%d" % j if j > 1 else "")
                if c == 1:
                    parts.append(z)
                elif c == -1:
                    parts.append("-" + z)
                else:
                    parts.append("%s*%s" % (rat_to_str(c), z))
        return " + ".join(parts).replace("+ -", "- ")


_CYC_ZERO = Cyc(1, (_ZERO,))
_CYC_ONE = Cyc(1, (_ONE,))


def cyc_normalize(m: int, raw) -> Cyc:
    """Reduce arbitrary polynomial coefficients in zeta_m to canonical form."""
    if m < 1:
        raise ValueError("conductor must be >= 1")
    raw = [Fraction(c) for c in raw]
    return Cyc(m, _reduce_coeffs(m, raw))


def cyc_arith(a: Cyc, b: Cyc, op: str) -> Cyc:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError("unknown op %r" % op)


def _solve_square(rows, rhs):
    """Solve a square Fraction system in place; None if singular."""
    n = len(rows)
    rows = [list(r) for r in rows]
    rhs = list(rhs)
    perm = list(range(n))
    for col in range(n):
        piv = None
        for i in range(col, n):
            if rows[i][col]:
                piv = i
                break
        if piv is None:
            return None
        rows[col], rows[piv] = rows[piv], rows[col]
        rhs[col], rhs[piv] = rhs[piv], rhs[col]
        inv = rows[col][col]
        for i in range(n):
            if i != col and rows[i][col]:
                f = rows[i][col] / inv
                for j in range(col, n):
                    rows[i][j] -= f * rows[col][j]
                rhs[i] -= f * rhs[col]
    return [rhs[i] / rows[i][i] for i in range(n)]


class CycMatrix:
    """Dense matrix of Cyc entries sharing one conductor.  Immutable."""

    __slots__ = ("rows", "cols", "m", "entries", "_hash")

    def __init__(self, rows: int, cols: int, entries):
        entries = [Cyc._coerce(e) for e in entries]
        assert len(entries) == rows * cols
        m = 1
        for e in entries:
            m = m * e.m // gcd(m, e.m)
        entries = tuple(e.lift(m) for e in entries)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *a):
        raise AttributeError("CycMatrix is immutable")

    @staticmethod
    def from_rows(rows_of_entries) -> "CycMatrix":
        rows = list(rows_of_entries)
        r = len(rows)
        c = len(rows[0]) if rows else 0
        flat = [e for row in rows for e in row]
        return CycMatrix(r, c, flat)

    @staticmethod
    def identity(n: int) -> "CycMatrix":
        return CycMatrix(n, n, [_CYC_ONE if i == j else _CYC_ZERO
                                for i in range(n) for j in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int):
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def row_list(self):
        return [list(self.row(i)) for i in range(self.rows)]

    def __mul__(self, other: "CycMatrix") -> "CycMatrix":
        assert self.cols == other.rows
        a, b, n, p, q = self.entries, other.entries, self.rows, self.cols, other.cols
        out = []
        for i in range(n):
            arow = a[i * p:(i + 1) * p]
            for j in range(q):
                s = _CYC_ZERO
                for k in range(p):
                    x = arow[k]
                    if not x.is_zero():
                        s = s + x * b[k * q + j]
                out.append(s)
        return CycMatrix(n, q, out)

    def apply(self, vec):
        """Matrix times column vector (sequence of Cyc)."""
        assert self.cols == len(vec)
        out = []
        for i in range(self.rows):
            s = _CYC_ZERO
            for k, v in enumerate(vec):
                x = self[i, k]
                if not x.is_zero():
                    s = s + x * v
            out.append(s)
        return out

    def apply_row(self, vec):
        """Row vector times matrix."""
        assert self.rows == len(vec)
        out = []
        for j in range(self.cols):
            s = _CYC_ZERO
            for k, v in enumerate(vec):
                if not v.is_zero():
                    s = s + v * self[k, j]
            out.append(s)
        return out

    def transpose(self) -> "CycMatrix":
        return CycMatrix(self.cols, self.rows,
                         [self[i, j] for j in range(self.cols) for i in range(self.rows)])

    def inverse(self) -> "CycMatrix":
        assert self.rows == self.cols
        n = self.rows
        work = [list(self.row(i)) + [_CYC_ONE if j == i else _CYC_ZERO for j in range(n)]
                for i in range(n)]
        red, piv, rank = _rref_rows(work)
        if rank < n:
            raise ZeroDivisionError("singular matrix")
        return CycMatrix.from_rows([r[n:] for r in red])

    def is_identity(self) -> bool:
        if self.rows != self.cols:
            return False
        for i in range(self.rows):
            for j in range(self.cols):
                e = self[i, j]
                if i == j:
                    if not (e.is_rational() and e.c[0] == 1):
                        return False
                elif not e.is_zero():
                    return False
        return True

    def __eq__(self, other):
        if not isinstance(other, CycMatrix):
            return NotImplemented
        if (self.rows, self.cols) != (other.rows, other.cols):
            return False
        return all(a == b for a, b in zip(self.entries, other.entries))

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.rows, self.cols, tuple(hash(e) for e in self.entries)))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self):
        return "CycMatrix(%d, %d, m=%d)" % (self.rows, self.cols, self.m)


def _rref_rows(work):
    """In-place reduced row echelon form on a list of Cyc row lists.
    Pivot = first nonzero entry in column order (arithmetic is exact, no
    magnitude heuristics).  Returns (rows, pivot columns, rank)."""
    nrows = len(work)
    ncols = len(work[0]) if nrows else 0
    pivots = []
    r = 0
    for col in range(ncols):
        piv = None
        for i in range(r, nrows):
            if not work[i][col].is_zero():
                piv = i
                break
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        inv = work[r][col].inverse()
        work[r] = [inv * e for e in work[r]]
        for i in range(nrows):
            if i != r and not work[i][col].is_zero():
                f = work[i][col]
                work[i] = [a - f * b for a, b in zip(work[i], work[r])]
        pivots.append(col)
        r += 1
        if r == nrows:
            break
    return work, pivots, r


def rref(M: CycMatrix):
    """Reduced row echelon form: (reduced CycMatrix, pivot column list, rank)."""
    if M.rows == 0:
        return M, [], 0
    work = [list(M.row(i)) for i in range(M.rows)]
    red, pivots, rank = _rref_rows(work)
    return CycMatrix.from_rows(red), pivots, rank


def kernel(M: CycMatrix) -> list:
    """Basis of the right null space, as lists of Cyc of length M.cols."""
    if M.rows == 0:
        return [[_CYC_ONE if i == j else _CYC_ZERO for i in range(M.cols)]
                for j in range(M.cols)]
    red, pivots, rank = rref(M)
    free = [j for j in range(M.cols) if j not in pivots]
    basis = []
    for f in free:
        vec = [_CYC_ZERO] * M.cols
        vec[f] = _CYC_ONE
        for r, p in enumerate(pivots):
            vec[p] = -red[r, f]
        basis.append(vec)
    return basis


# -- serialization -----------------------------------------------------------

def rat_to_str(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return "%d/%d" % (q.numerator, q.denominator)


def rat_from_str(s) -> Fraction:
    return Fraction(s)


def cyc_to_json(x: Cyc):
    return {"m": x.m, "c": [rat_to_str(c) for c in x.c]}


def cyc_from_json(obj) -> Cyc:
    if isinstance(obj, (int, str)):
        return Cyc.rational(Fraction(obj))
    return Cyc(int(obj["m"]), tuple(Fraction(c) for c in obj["c"]))
