"""Exact arithmetic: the ring Z[2cos(pi/L)], Smith normal form, adjugates and
commutants over the rationals.

Everything here works with Python integers and ``fractions.Fraction``; there
is no floating-point path.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Sequence

import numpy as np

__all__ = [
    "RealCyclotomic",
    "ExactMatrix",
    "SNFResult",
    "cyclotomic_polynomial",
    "minimal_polynomial",
    "ring_arith",
    "sign_of",
    "two_cos_pi_over",
    "smith_normal_form",
    "determinant",
    "adjugate",
    "rref",
    "rank",
    "commutant_dimension",
    "matmul",
    "format_matrix",
]


# ---------------------------------------------------------------------------
# integer polynomials (coefficient lists, lowest degree first)


def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _pmul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _padd(a, b):
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def _pscale(a, c):
    return [c * x for x in a]


def _pdivmod(num, den):
    """Division by a monic (or unit-leading) integer polynomial."""
    num = list(num)
    den = _trim(den)
    lead = den[-1]
    q = [0] * max(len(num) - len(den) + 1, 0)
    for k in range(len(num) - len(den), -1, -1):
        c = num[k + len(den) - 1]
        if c % lead:
            raise ValueError("non-exact polynomial division")
        c //= lead
        q[k] = c
        for i, d in enumerate(den):
            num[k + i] -= c * d
    return _trim(q), _trim(num[: len(den) - 1])


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple:
    """Coefficients of Phi_n, lowest degree first."""
    if n < 1:
        raise ValueError("n must be positive")
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num, rem = _pdivmod(num, list(cyclotomic_polynomial(d)))
            assert not rem
    return tuple(num)


def _chebyshev_sum(j):
    """Integer polynomial P_j with x^j + x^-j = P_j(x + 1/x)."""
    if j == 0:
        return [2]
    prev, cur = [2], [0, 1]
    for _ in range(j - 1):
        prev, cur = cur, _padd(_pmul([0, 1], cur), _pscale(prev, -1))
    return cur


@lru_cache(maxsize=None)
def minimal_polynomial(L: int) -> tuple:
    """Minimal polynomial over Q of 2cos(pi/L), monic, lowest degree first.

    Obtained by folding the palindromic cyclotomic polynomial Phi_{2L} into a
    polynomial in x + 1/x. The cache is guarded by ``lru_cache``'s own lock.
    """
    if L < 1:
        raise ValueError("conductor must be positive")
    if L == 1:
        return (2, 1)  # 2cos(pi) = -2
    phi = cyclotomic_polynomial(2 * L)
    k = (len(phi) - 1) // 2
    out = [phi[k]]
    for j in range(1, k + 1):
        out = _padd(out, _pscale(_chebyshev_sum(j), phi[k + j]))
    return tuple(out)


@lru_cache(maxsize=None)
def _power_reductions(L: int) -> tuple:
    """Row k holds alpha^k reduced mod the minimal polynomial, k < 2*deg - 1."""
    f = minimal_polynomial(L)
    d = len(f) - 1
    rows = []
    cur = [0] * d
    cur[0] = 1
    for _ in range(max(2 * d - 1, 1)):
        rows.append(tuple(cur))
        # multiply by alpha
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            cur = [c - top * f[i] for i, c in enumerate(cur)]
    return tuple(rows)


def _reduce(coeffs, L):
    f = minimal_polynomial(L)
    d = len(f) - 1
    coeffs = list(coeffs)
    if len(coeffs) <= d:
        return tuple(coeffs + [0] * (d - len(coeffs)))
    _, rem = _pdivmod(coeffs, list(f))
    rem = list(rem) + [0] * (d - len(rem))
    return tuple(rem)


# ---------------------------------------------------------------------------
# the ring Z[2cos(pi/L)]


@dataclass(frozen=True)
class RealCyclotomic:
    """An element sum_k coeffs[k] * alpha^k with alpha = 2cos(pi/L).

    ``coeffs`` always has exactly ``deg(minimal_polynomial(L))`` entries, so
    equality of dataclass fields is equality of numbers.
    """

    L: int
    coeffs: tuple

    def __post_init__(self):
        d = len(minimal_polynomial(self.L)) - 1
        if len(self.coeffs) != d:
            object.__setattr__(self, "coeffs", _reduce(self.coeffs, self.L))

    @classmethod
    def from_int(cls, value, L: int = 1) -> "RealCyclotomic":
        d = len(minimal_polynomial(L)) - 1
        return cls(L, (value,) + (0,) * (d - 1))

    @classmethod
    def alpha(cls, L: int) -> "RealCyclotomic":
        return cls(L, _reduce([0, 1], L))

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    def lift(self, L: int) -> "RealCyclotomic":
        """Re-express in Z[2cos(pi/L)]; requires self.L to divide L."""
        if L == self.L:
            return self
        if L % self.L:
            raise ValueError(f"conductor {self.L} does not divide {L}")
        # 2cos(pi/L1) = P_{L/L1}(2cos(pi/L))
        sub = _chebyshev_sum(L // self.L) if self.L > 1 else [-2]
        total: list = []
        power = [1]
        for c in self.coeffs:
            if c:
                total = _padd(total, _pscale(power, c))
            power = _pmul(power, sub)
        return RealCyclotomic(L, _reduce(total or [0], L))

    def _common(self, other):
        if isinstance(other, (int, Fraction)):
            return self, RealCyclotomic.from_int(other, self.L)
        if self.L == other.L:
            return self, other
        L = math.lcm(self.L, other.L)
        return self.lift(L), other.lift(L)

    def __add__(self, other):
        a, b = self._common(other)
        return RealCyclotomic(a.L, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return RealCyclotomic(self.L, tuple(-x for x in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._common(other)
        red = _power_reductions(a.L)
        d = a.degree
        out = [0] * d
        for i, x in enumerate(a.coeffs):
            if not x:
                continue
            for j, y in enumerate(b.coeffs):
                if y:
                    row = red[i + j]
                    xy = x * y
                    for k in range(d):
                        if row[k]:
                            out[k] += xy * row[k]
        return RealCyclotomic(a.L, tuple(out))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def sign(self) -> int:
        return sign_of(self)

    def __float__(self):
        x = 2 * math.cos(math.pi / self.L)
        return float(sum(float(c) * x**k for k, c in enumerate(self.coeffs)))

    def __str__(self):
        if all(c == 0 for c in self.coeffs[1:]):
            return str(self.coeffs[0])
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if k == 0 else ("a" if k == 1 else f"a^{k}")
            if k and c == 1:
                terms.append(mono)
            elif k and c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}{'*' + mono if mono else ''}")
        return "(" + " + ".join(terms).replace("+ -", "- ") + f")[L={self.L}]"


def ring_arith(a: RealCyclotomic, b: RealCyclotomic | None, op: str) -> RealCyclotomic:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    raise ValueError(f"unknown ring operation {op!r}")


def two_cos_pi_over(m, L: int) -> RealCyclotomic:
    """2cos(pi/m) inside Z[2cos(pi/L)]; m = inf gives 2, otherwise m must divide L
    unless the value is rational (m <= 3)."""
    if m == math.inf:
        return RealCyclotomic.from_int(2, L)
    if m in (1, 2, 3):
        return RealCyclotomic.from_int({1: -2, 2: 0, 3: 1}[m], L)
    if L % m:
        raise ValueError(f"label {m} does not divide conductor {L}")
    return RealCyclotomic(m, _reduce([0, 1], m)).lift(L)


# -- exact sign --------------------------------------------------------------


def _peval(p, x):
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _pderiv(p):
    return [k * c for k, c in enumerate(p)][1:]


def _prem_fraction(a, b):
    a = [Fraction(x) for x in a]
    b = [Fraction(x) for x in _trim(b)]
    while len(_trim(a)) >= len(b) and _trim(a):
        a = _trim(a)
        c = a[-1] / b[-1]
        shift = len(a) - len(b)
        for i, y in enumerate(b):
            a[shift + i] -= c * y
        a = _trim(a)
    return _trim(a)


@lru_cache(maxsize=None)
def _sturm_chain(L):
    f = [Fraction(c) for c in minimal_polynomial(L)]
    chain = [f, [Fraction(c) for c in _pderiv(f)]]
    while len(chain[-1]) > 1:
        r = _prem_fraction(chain[-2], chain[-1])
        if not r:
            break
        chain.append([-c for c in r])
    return tuple(tuple(p) for p in chain)


def _sign_changes(chain, x):
    signs = [v for v in (_peval(p, x) for p in chain) if v != 0]
    return sum(1 for u, v in zip(signs, signs[1:]) if (u > 0) != (v > 0))


def _roots_in(chain, lo, hi):
    """Number of distinct roots in the half-open interval (lo, hi]."""
    return _sign_changes(chain, lo) - _sign_changes(chain, hi)


@lru_cache(maxsize=None)
def _isolating_interval(L):
    """Rational (lo, hi] containing 2cos(pi/L) and no other root of its minimal polynomial."""
    chain = _sturm_chain(L)
    approx = Fraction(2 * math.cos(math.pi / L)).limit_denominator(10**12)
    width = Fraction(1, 2)
    while True:
        lo, hi = approx - width, min(approx + width, Fraction(2))
        if hi <= lo:
            hi = approx + width
        n = _roots_in(chain, lo, hi)
        if n == 1 and (L <= 2 or _roots_in(chain, lo, Fraction(2)) == 1):
            return lo, hi
        width /= 2


def _interval_poly(coeffs, lo, hi):
    """Enclosure of sum c_k x^k for x in [lo, hi], via Horner with interval ops."""
    a = b = Fraction(0)
    for c in reversed(coeffs):
        prods = (a * lo, a * hi, b * lo, b * hi)
        a, b = min(prods) + c, max(prods) + c
    return a, b


def sign_of(a: RealCyclotomic) -> int:
    """Exact sign of the real number a(2cos(pi/L))."""
    if a.is_zero():
        return 0
    f = minimal_polynomial(a.L)
    if len(f) == 2:  # rational generator
        value = _peval(list(a.coeffs), Fraction(-f[0]))
        return (value > 0) - (value < 0)
    lo, hi = _isolating_interval(a.L)
    flo = _peval(f, lo)
    while True:
        low, high = _interval_poly(a.coeffs, lo, hi)
        if low > 0:
            return 1
        if high < 0:
            return -1
        mid = (lo + hi) / 2
        fm = _peval(f, mid)
        if fm == 0:
            value = _peval(list(a.coeffs), mid)
            return (value > 0) - (value < 0)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid


# ---------------------------------------------------------------------------
# matrices over Z[2cos(pi/L)]


class ExactMatrix:
    """Square or rectangular matrix over Z[2cos(pi/L)].

    Stored as a stack of integer (object dtype) coefficient matrices, one per
    power of alpha below the degree of the minimal polynomial. Instances are
    treated as immutable.
    """

    __slots__ = ("L", "stack")

    def __init__(self, L: int, stack):
        self.L = L
        stack = np.asarray(stack, dtype=object)
        if stack.ndim != 3:
            raise ValueError("coefficient stack must be 3-dimensional")
        stack.setflags(write=False)
        self.stack = stack

    @classmethod
    def from_entries(cls, rows: Sequence[Sequence], L: int | None = None) -> "ExactMatrix":
        flat = [x for r in rows for x in r]
        if L is None:
            L = reduce(math.lcm, (x.L for x in flat if isinstance(x, RealCyclotomic)), 1)
        d = len(minimal_polynomial(L)) - 1
        nr, nc = len(rows), len(rows[0]) if rows else 0
        stack = np.zeros((d, nr, nc), dtype=object)
        stack[...] = 0
        for i, r in enumerate(rows):
            if len(r) != nc:
                raise ValueError("ragged rows")
            for j, x in enumerate(r):
                x = x.lift(L) if isinstance(x, RealCyclotomic) else RealCyclotomic.from_int(x, L)
                for k in range(d):
                    stack[k, i, j] = x.coeffs[k]
        return cls(L, stack)

    @classmethod
    def identity(cls, n: int, L: int = 1) -> "ExactMatrix":
        d = len(minimal_polynomial(L)) - 1
        stack = np.zeros((d, n, n), dtype=object)
        stack[...] = 0
        for i in range(n):
            stack[0, i, i] = 1
        return cls(L, stack)

    @property
    def shape(self):
        return self.stack.shape[1:]

    def __getitem__(self, ij) -> RealCyclotomic:
        i, j = ij
        return RealCyclotomic(self.L, tuple(int(c) if isinstance(c, (int, np.integer)) else c
                                            for c in self.stack[:, i, j]))

    def rows(self):
        n, m = self.shape
        return [[self[i, j] for j in range(m)] for i in range(n)]

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.L != other.L:
            raise ValueError("conductor mismatch")
        if self.shape[1] != other.shape[0]:
            raise ValueError("shape mismatch")
        red = _power_reductions(self.L)
        d = self.stack.shape[0]
        out = np.zeros((d, self.shape[0], other.shape[1]), dtype=object)
        out[...] = 0
        for i in range(d):
            for j in range(d):
                prod = self.stack[i].dot(other.stack[j])
                row = red[i + j]
                for k in range(d):
                    if row[k]:
                        out[k] = out[k] + row[k] * prod
        return ExactMatrix(self.L, out)

    def __add__(self, other):
        return ExactMatrix(self.L, self.stack + other.stack)

    def __sub__(self, other):
        return ExactMatrix(self.L, self.stack - other.stack)

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.L == other.L and self.stack.shape == other.stack.shape and bool(
            (self.stack == other.stack).all())

    def __hash__(self):
        return hash((self.L, tuple(self.stack.flat)))

    def is_identity(self) -> bool:
        n, m = self.shape
        return n == m and self == ExactMatrix.identity(n, self.L)

    def __str__(self):
        return format_matrix(self.rows())

    __repr__ = __str__


def format_matrix(rows) -> str:
    """Rows of space-separated exact entries."""
    return "\n".join(" ".join(str(x) for x in r) for r in rows)


# ---------------------------------------------------------------------------
# integer matrices


def matmul(A, B):
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


@dataclass(frozen=True)
class SNFResult:
    """U @ A @ V == S with U, V unimodular and S = diag(d1 | d2 | ...)."""

    S: list
    U: list
    V: list

    @property
    def diagonal(self):
        return [self.S[i][i] for i in range(min(len(self.S), len(self.S[0]) if self.S else 0))]


def smith_normal_form(A) -> SNFResult:
    """Smith normal form with transforms, pivoting on the smallest nonzero
    absolute value (row-major tie break)."""
    M = [list(map(int, r)) for r in A]
    m = len(M)
    n = len(M[0]) if m else 0
    U, V = _identity(m), _identity(n)

    def swap_rows(i, j):
        M[i], M[j] = M[j], M[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in M:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, c):  # row dst += c * row src
        M[dst] = [a + c * b for a, b in zip(M[dst], M[src])]
        U[dst] = [a + c * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, c):
        for r in M:
            r[dst] += c * r[src]
        for r in V:
            r[dst] += c * r[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    if M[i][j] and (best is None or abs(M[i][j]) < abs(M[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                return _finish(M, U, V)
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            p = M[t][t]
            dirty = False
            for i in range(t + 1, m):
                if M[i][t]:
                    add_row(i, t, -(M[i][t] // p))
                    dirty |= M[i][t] != 0
            for j in range(t + 1, n):
                if M[t][j]:
                    add_col(j, t, -(M[t][j] // p))
                    dirty |= M[t][j] != 0
            if dirty:
                continue
            # divisibility of the remaining block
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if M[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if M[t][t] < 0:
            M[t] = [-x for x in M[t]]
            U[t] = [-x for x in U[t]]
    return _finish(M, U, V)


def _finish(M, U, V):
    return SNFResult(M, U, V)


def determinant(A) -> int:
    """Bareiss fraction-free determinant of a square integer matrix."""
    M = [list(map(int, r)) for r in A]
    n = len(M)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k]), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def adjugate(A):
    """Return (B, d) with A @ B == d * I and d = det(A), singular A included.

    B is the classical adjugate (transposed cofactor matrix); the transpose of
    A does not have this property in general.
    """
    n = len(A)
    if any(len(r) != n for r in A):
        raise ValueError("adjugate needs a square matrix")
    if n == 1:
        return [[1]], int(A[0][0])
    B = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1:] for k, row in enumerate(A) if k != i]
            B[j][i] = (-1) ** (i + j) * determinant(minor)
    return B, determinant(A)


# ---------------------------------------------------------------------------
# rational linear algebra


def rref(rows):
    """Reduced row echelon form over Q. Returns (rows, pivot_columns)."""
    M = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    r = 0
    ncols = len(M[0]) if M else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def rank(rows) -> int:
    return len(rref(rows)[1]) if rows else 0


def commutant_dimension(gens) -> int:
    """dim_Q {X : XM = MX for every M in gens}, via the stacked Sylvester system."""
    gens = [[[Fraction(x) for x in r] for r in M] for M in gens]
    if not gens:
        raise ValueError("need at least one matrix to fix the dimension")
    n = len(gens[0])
    if any(len(M) != n or any(len(r) != n for r in M) for M in gens):
        raise ValueError("matrices must be square of equal size")
    eqs = []
    for M in gens:
        for i in range(n):
            for j in range(n):
                row = [Fraction(0)] * (n * n)
                for k in range(n):
                    row[i * n + k] += M[k][j]  # (XM)_ij
                    row[k * n + j] -= M[i][k]  # (MX)_ij
                if any(row):
                    eqs.append(row)
    return n * n - (rank(eqs) if eqs else 0)
