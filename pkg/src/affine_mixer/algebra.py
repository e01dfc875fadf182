"""Exact integer linear algebra and spectral classification.

Matrices carry arbitrary precision integer entries and every structural
computation (determinant, characteristic and minimal polynomial, rank,
kernel vectors, polynomial factor extraction) is exact.  Floating point
enters only where root values themselves are irrational, and every such
root is residual-checked against the integer polynomial it came from.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import NonConvergence, OrderMismatch, SingularMatrix

TOL_UNIT = 1e-9
ROOT_RESIDUAL_TOL = 1e-9
IDENTITY_RESIDUAL_TOL = 1e-8
DEFAULT_L_MAX = 24


class Regime(str, Enum):
    """Spectral regime of an integer matrix, keyed by its factor orders."""

    NON_UNIT_MODULUS = "NonUnitModulus"
    ROOTS_OF_INTEGER_EXPANDING = "RootsOfIntegerExpanding"
    UNIT_ROOT_MIXED = "UnitRootMixed"
    UNIT_ROOT_TORSION = "UnitRootTorsion"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class IntMatrix:
    """Square integer matrix with immutable rows."""

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        k = len(self.rows)
        if k < 1:
            raise ValueError("matrix must have dimension >= 1")
        for row in self.rows:
            if len(row) != k:
                raise ValueError("matrix must be square")
            for entry in row:
                if not isinstance(entry, int):
                    raise ValueError("matrix entries must be integers")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "IntMatrix":
        return cls(tuple(tuple(int(v) for v in row) for row in rows))

    @classmethod
    def identity(cls, k: int) -> "IntMatrix":
        return cls(tuple(tuple(1 if i == j else 0 for j in range(k)) for i in range(k)))

    @property
    def k(self) -> int:
        return len(self.rows)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(tuple(zip(*self.rows)))

    def apply(self, vec: Sequence[int]) -> tuple[int, ...]:
        """Exact matrix-vector product A @ vec."""
        return tuple(sum(a * int(x) for a, x in zip(row, vec)) for row in self.rows)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        return mat_mul(self, other)


def as_matrix(value: IntMatrix | Sequence[Sequence[int]]) -> IntMatrix:
    if isinstance(value, IntMatrix):
        return value
    return IntMatrix.from_rows(value)


def mat_mul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    if a.k != b.k:
        raise ValueError("dimension mismatch")
    bt = b.transpose().rows
    return IntMatrix(
        tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a.rows)
    )


def mat_add(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    return IntMatrix(
        tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a.rows, b.rows))
    )


def mat_scale(a: IntMatrix, c: int) -> IntMatrix:
    return IntMatrix(tuple(tuple(c * x for x in row) for row in a.rows))


def mat_trace(a: IntMatrix) -> int:
    return sum(a.rows[i][i] for i in range(a.k))


def mat_pow(a: IntMatrix, e: int) -> IntMatrix:
    """Exact integer power A**e for e >= 0."""
    if e < 0:
        raise ValueError("exponent must be >= 0")
    result = IntMatrix.identity(a.k)
    base = a
    while e:
        if e & 1:
            result = mat_mul(result, base)
        base = mat_mul(base, base)
        e >>= 1
    return result


def mat_mod(a: IntMatrix, p: int) -> IntMatrix:
    return IntMatrix(tuple(tuple(x % p for x in row) for row in a.rows))


def mat_pow_mod(a: IntMatrix, e: int, p: int) -> IntMatrix:
    """A**e with entries reduced mod p at every step."""
    if e < 0:
        raise ValueError("exponent must be >= 0")
    if p < 2:
        raise ValueError("modulus must be >= 2")
    result = mat_mod(IntMatrix.identity(a.k), p)
    base = mat_mod(a, p)
    while e:
        if e & 1:
            result = mat_mod(mat_mul(result, base), p)
        base = mat_mod(mat_mul(base, base), p)
        e >>= 1
    return result


def inf_norm(a: IntMatrix) -> int:
    """Operator infinity norm: maximum absolute row sum."""
    return max(sum(abs(x) for x in row) for row in a.rows)


def det_int(a: IntMatrix | Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    a = as_matrix(a)
    n = a.k
    m = [list(row) for row in a.rows]
    sign = 1
    prev = 1
    for i in range(n - 1):
        if m[i][i] == 0:
            pivot = next((r for r in range(i + 1, n) if m[r][i] != 0), None)
            if pivot is None:
                return 0
            m[i], m[pivot] = m[pivot], m[i]
            sign = -sign
        for r in range(i + 1, n):
            for c in range(i + 1, n):
                m[r][c] = (m[r][c] * m[i][i] - m[r][i] * m[i][c]) // prev
            m[r][i] = 0
        prev = m[i][i]
    return sign * m[n - 1][n - 1]


def int_rank(vectors: Sequence[Sequence[int]]) -> int:
    """Rank of a list of integer vectors, by fraction-free elimination."""
    rows = [list(v) for v in vectors if any(v)]
    if not rows:
        return 0
    width = len(rows[0])
    rank = 0
    col = 0
    prev = 1
    while rank < len(rows) and col < width:
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if pivot is None:
            col += 1
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for r in range(rank + 1, len(rows)):
            for c in range(col + 1, width):
                rows[r][c] = (rows[r][c] * rows[rank][col] - rows[r][col] * rows[rank][c]) // prev
            rows[r][col] = 0
        prev = rows[rank][col]
        rank += 1
        col += 1
    return rank


def integer_kernel_vector(a: IntMatrix) -> tuple[int, ...]:
    """Primitive integer kernel vector of a singular integer matrix.

    Deterministic: the first free column of the reduced system is set to 1,
    denominators are cleared, the gcd is divided out, and the sign is fixed
    so the first nonzero component is positive.
    """
    n = a.k
    m = [[Fraction(x) for x in row] for row in a.rows]
    pivot_cols: list[int] = []
    row_idx = 0
    for col in range(n):
        pivot = next((r for r in range(row_idx, n) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[row_idx], m[pivot] = m[pivot], m[row_idx]
        inv = m[row_idx][col]
        m[row_idx] = [x / inv for x in m[row_idx]]
        for r in range(n):
            if r != row_idx and m[r][col] != 0:
                factor = m[r][col]
                m[r] = [x - factor * y for x, y in zip(m[r], m[row_idx])]
        pivot_cols.append(col)
        row_idx += 1
    free_cols = [c for c in range(n) if c not in pivot_cols]
    if not free_cols:
        raise ValueError("matrix has trivial kernel")
    free = free_cols[0]
    x = [Fraction(0)] * n
    x[free] = Fraction(1)
    for r, col in enumerate(pivot_cols):
        x[col] = -m[r][free]
    denom = math.lcm(*(v.denominator for v in x))
    ints = [int(v * denom) for v in x]
    g = math.gcd(*(abs(v) for v in ints))
    ints = [v // g for v in ints]
    first = next(v for v in ints if v != 0)
    if first < 0:
        ints = [-v for v in ints]
    return tuple(ints)


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial, coefficients stored lowest degree first."""

    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        coeffs = tuple(int(c) for c in self.coeffs)
        while coeffs and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def evaluate(self, z):
        """Horner evaluation; exact for int inputs, complex otherwise."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def derivative(self) -> "IntPolynomial":
        return IntPolynomial(tuple(i * c for i, c in enumerate(self.coeffs) if i >= 1))

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            term = "x" if i == 1 else f"x^{i}" if i else ""
            mag = "" if abs(c) == 1 and i else str(abs(c))
            parts.append(("-" if c < 0 else "+" if parts else "") + mag + term)
        return "".join(parts)


X_POLY = IntPolynomial((0, 1))


def poly_mul(f: IntPolynomial, g: IntPolynomial) -> IntPolynomial:
    if f.is_zero or g.is_zero:
        return IntPolynomial(())
    out = [0] * (f.degree + g.degree + 1)
    for i, a in enumerate(f.coeffs):
        if a:
            for j, b in enumerate(g.coeffs):
                out[i + j] += a * b
    return IntPolynomial(tuple(out))


def poly_divmod(f: IntPolynomial, g: IntPolynomial) -> tuple[IntPolynomial, IntPolynomial]:
    """Exact division with remainder; the divisor must be monic."""
    if not g.is_monic:
        raise ValueError("divisor must be monic")
    if f.degree < g.degree:
        return IntPolynomial(()), f
    rem = list(f.coeffs)
    dg = g.degree
    q = [0] * (f.degree - dg + 1)
    for i in range(f.degree - dg, -1, -1):
        coef = rem[i + dg]
        if coef:
            q[i] = coef
            for t, gc in enumerate(g.coeffs):
                rem[i + t] -= coef * gc
    return IntPolynomial(tuple(q)), IntPolynomial(tuple(rem[:dg]))


def poly_mod(f: IntPolynomial, g: IntPolynomial) -> IntPolynomial:
    return poly_divmod(f, g)[1]


def poly_eval_matrix(f: IntPolynomial, a: IntMatrix) -> IntMatrix:
    """Horner evaluation of f at an integer matrix."""
    k = a.k
    acc = mat_scale(IntMatrix.identity(k), 0)
    for c in reversed(f.coeffs):
        acc = mat_add(mat_mul(acc, a), mat_scale(IntMatrix.identity(k), c))
    return acc


def char_poly(a: IntMatrix | Sequence[Sequence[int]]) -> IntPolynomial:
    """Characteristic polynomial det(x*I - A), monic, exact.

    Faddeev-LeVerrier recurrence; every division is exact by construction.
    """
    a = as_matrix(a)
    k = a.k
    c = [0] * (k + 1)
    c[k] = 1
    m = mat_scale(IntMatrix.identity(k), 0)
    for step in range(1, k + 1):
        m = mat_add(mat_mul(a, m), mat_scale(IntMatrix.identity(k), c[k - step + 1]))
        am = mat_mul(a, m)
        tr = mat_trace(am)
        assert tr % step == 0
        c[k - step] = -tr // step
    return IntPolynomial(tuple(c))


def _solve_exact(columns: list[list[int]], rhs: list[int]) -> Optional[list[Fraction]]:
    """Solve sum_i x_i * columns[i] = rhs over the rationals.

    Returns one solution (free variables set to 0) or None if inconsistent.
    """
    ncols = len(columns)
    nrows = len(rhs)
    m = [[Fraction(columns[c][r]) for c in range(ncols)] + [Fraction(rhs[r])] for r in range(nrows)]
    pivot_cols: list[int] = []
    row_idx = 0
    for col in range(ncols):
        pivot = next((r for r in range(row_idx, nrows) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[row_idx], m[pivot] = m[pivot], m[row_idx]
        inv = m[row_idx][col]
        m[row_idx] = [x / inv for x in m[row_idx]]
        for r in range(nrows):
            if r != row_idx and m[r][col] != 0:
                factor = m[r][col]
                m[r] = [x - factor * y for x, y in zip(m[r], m[row_idx])]
        pivot_cols.append(col)
        row_idx += 1
    for r in range(row_idx, nrows):
        if m[r][ncols] != 0:
            return None
    x = [Fraction(0)] * ncols
    for r, col in enumerate(pivot_cols):
        x[col] = m[r][ncols]
    return x


def minimal_poly(a: IntMatrix | Sequence[Sequence[int]]) -> IntPolynomial:
    """Monic integer minimal polynomial, by exact Krylov elimination.

    The first power A**e that is a rational combination of lower powers
    yields the polynomial; annihilation is re-verified exactly before
    returning.
    """
    a = as_matrix(a)
    k = a.k
    powers = [IntMatrix.identity(k)]
    for _ in range(k):
        powers.append(mat_mul(powers[-1], a))
    vecs = [[x for row in p.rows for x in row] for p in powers]
    for e in range(1, k + 1):
        sol = _solve_exact(vecs[:e], vecs[e])
        if sol is None:
            continue
        coeffs = [-c for c in sol] + [Fraction(1)]
        assert all(c.denominator == 1 for c in coeffs)
        poly = IntPolynomial(tuple(int(c) for c in coeffs))
        check = poly_eval_matrix(poly, a)
        assert all(x == 0 for row in check.rows for x in row)
        return poly
    raise AssertionError("unreachable: A**k is always a combination of lower powers")


def _integer_roots(f: IntPolynomial) -> list[int]:
    """All integer roots of a monic integer polynomial, with multiplicity."""
    roots: list[int] = []
    while f.degree >= 1 and f.coeffs[0] == 0:
        roots.append(0)
        f = IntPolynomial(f.coeffs[1:])
    changed = True
    while changed and f.degree >= 1:
        changed = False
        c0 = abs(f.coeffs[0])
        small = [t for t in range(1, math.isqrt(c0) + 1) if c0 % t == 0]
        divisors = sorted({t for base in small for t in (base, c0 // base)})
        for r in [s * t for t in divisors for s in (1, -1)]:
            while f.degree >= 1 and f.evaluate(r) == 0:
                f, rem = poly_divmod(f, IntPolynomial((-r, 1)))
                assert rem.is_zero
                roots.append(r)
                changed = True
    return roots


def _split_quartic(f: IntPolynomial) -> Optional[tuple[IntPolynomial, IntPolynomial]]:
    """Split a monic integer quartic into two monic integer quadratics.

    For x^4 + b x^3 + c x^2 + d x + e = (x^2 + u x + v)(x^2 + w x + s) the
    constant pair (v, s) must multiply to e; all divisor pairs are tried.
    """
    e, d, c, b = f.coeffs[0], f.coeffs[1], f.coeffs[2], f.coeffs[3]
    if e == 0:
        return None
    small = [t for t in range(1, math.isqrt(abs(e)) + 1) if abs(e) % t == 0]
    divisors = sorted({t for base in small for t in (base, abs(e) // base)})
    pairs = [(v, e // v) for t in divisors for v in (t, -t)]
    for v, s in pairs:
        if s != v:
            num = d - v * b
            den = s - v
            if num % den != 0:
                continue
            u = num // den
            w = b - u
            if v + s + u * w == c and u * s + v * w == d:
                return IntPolynomial((v, u, 1)), IntPolynomial((s, w, 1))
        else:
            if v * b != d:
                continue
            disc = b * b - 4 * (c - 2 * v)
            if disc < 0:
                continue
            root = math.isqrt(disc)
            if root * root != disc or (b + root) % 2 != 0:
                continue
            u = (b + root) // 2
            w = b - u
            return IntPolynomial((v, u, 1)), IntPolynomial((v, w, 1))
    return None


def factor_int_poly(
    f: IntPolynomial,
) -> tuple[tuple[tuple[IntPolynomial, int], ...], Optional[IntPolynomial]]:
    """Factor a monic integer polynomial over the integers.

    Extracts all integer roots, then splits what remains into irreducible
    quadratics where possible (complete through degree 4).  Returns the
    factors with multiplicities plus an unfactored remainder, or None when
    the factorization is complete.
    """
    if not f.is_monic:
        raise ValueError("polynomial must be monic")
    counts: dict[IntPolynomial, int] = {}
    for r in _integer_roots(f):
        lin = IntPolynomial((-r, 1))
        counts[lin] = counts.get(lin, 0) + 1
    rem = f
    for poly, mult in counts.items():
        for _ in range(mult):
            rem, check = poly_divmod(rem, poly)
            assert check.is_zero
    remainder: Optional[IntPolynomial] = None
    while rem.degree >= 2:
        if rem.degree in (2, 3):
            counts[rem] = counts.get(rem, 0) + 1
            rem = IntPolynomial((1,))
        elif rem.degree == 4:
            split = _split_quartic(rem)
            if split is None:
                counts[rem] = counts.get(rem, 0) + 1
                rem = IntPolynomial((1,))
            else:
                qa, qb = split
                counts[qa] = counts.get(qa, 0) + 1
                counts[qb] = counts.get(qb, 0) + 1
                rem = IntPolynomial((1,))
        else:
            remainder = rem
            break
    factors = tuple(sorted(counts.items(), key=lambda it: (it[0].degree, it[0].coeffs)))
    return factors, remainder


def _residual_scale(f: IntPolynomial, z: complex) -> float:
    mag = abs(z)
    return max(1.0, sum(abs(c) * mag**i for i, c in enumerate(f.coeffs)))


def _polish_root(f: IntPolynomial, z: complex) -> complex:
    df = f.derivative()
    for _ in range(50):
        fv = complex(f.evaluate(z))
        if abs(fv) <= 1e-14 * _residual_scale(f, z):
            break
        dv = complex(df.evaluate(z))
        if dv == 0:
            break
        z = z - fv / dv
    return z


def _pair_conjugates(roots: list[complex], tol: float) -> list[complex]:
    """Snap a numeric root list of a real polynomial into exact conjugate pairs."""
    out: list[complex] = []
    pending = sorted(roots, key=lambda z: (z.real, abs(z.imag), z.imag))
    used = [False] * len(pending)
    for i, z in enumerate(pending):
        if used[i]:
            continue
        used[i] = True
        if abs(z.imag) <= tol:
            out.append(complex(z.real, 0.0))
            continue
        best = None
        best_dist = None
        for j in range(len(pending)):
            if used[j]:
                continue
            dist = abs(pending[j] - z.conjugate())
            if best_dist is None or dist < best_dist:
                best, best_dist = j, dist
        if best is None:
            out.append(z)
            continue
        used[best] = True
        mid = (z + pending[best].conjugate()) / 2
        im = abs(mid.imag)
        out.append(complex(mid.real, im))
        out.append(complex(mid.real, -im))
    return out


def _roots_numeric(f: IntPolynomial) -> list[complex]:
    arr = np.array(list(reversed(f.coeffs)), dtype=float)
    raw = [complex(z) for z in np.roots(arr)]
    polished = [_polish_root(f, z) for z in raw]
    return _pair_conjugates(polished, 1e-9)


def _roots_of_irreducible(f: IntPolynomial) -> list[complex]:
    if f.degree == 1:
        return [complex(-f.coeffs[0], 0.0)]
    if f.degree == 2:
        c0, b, _ = f.coeffs
        disc = b * b - 4 * c0
        if disc >= 0:
            root = math.isqrt(disc)
            sq = float(root) if root * root == disc else math.sqrt(float(disc))
            return [complex((-b - sq) / 2, 0.0), complex((-b + sq) / 2, 0.0)]
        sq = math.sqrt(float(-disc))
        return [complex(-b / 2, -sq / 2), complex(-b / 2, sq / 2)]
    return _roots_numeric(f)


def eigenvalues(f: IntPolynomial, tol: float = ROOT_RESIDUAL_TOL) -> tuple[complex, ...]:
    """All roots of an integer polynomial, with multiplicity.

    Roots of a real polynomial come back in exact conjugate pairs.  Every
    root must satisfy |f(root)| <= tol * scale or NonConvergence is raised.
    """
    if f.is_zero:
        raise ValueError("zero polynomial has no defined root list")
    if f.degree == 0:
        return ()
    if f.is_monic:
        factors, remainder = factor_int_poly(f)
        roots: list[complex] = []
        for poly, mult in factors:
            roots.extend(_roots_of_irreducible(poly) * mult)
        if remainder is not None:
            roots.extend(_roots_numeric(remainder))
    else:
        roots = _roots_numeric(f)
    roots.sort(key=lambda z: (z.real, z.imag))
    for z in roots:
        residual = abs(complex(f.evaluate(z)))
        if residual > tol * _residual_scale(f, z):
            raise NonConvergence(
                f"root {z} of {f} has residual {residual:.3e} above tolerance"
            )
    return tuple(roots)


def root_of_integer_order(f: IntPolynomial, l_max: int = DEFAULT_L_MAX) -> Optional[tuple[int, int]]:
    """Smallest l <= l_max with x**l congruent to an integer m >= 1 mod f.

    When (l, m) is returned, every root of f satisfies root**l = m, so the
    roots all have modulus m**(1/l).  Returns None if no such l exists in
    range.  The input must be monic; exactness needs nothing else.
    """
    if not f.is_monic or f.degree < 1:
        raise ValueError("expected a monic polynomial of degree >= 1")
    cur = poly_mod(X_POLY, f)
    for l in range(1, l_max + 1):
        if l > 1:
            cur = poly_mod(poly_mul(cur, X_POLY), f)
        if cur.degree <= 0:
            m = cur.coeffs[0] if cur.coeffs else 0
            if m >= 1:
                return l, m
    return None


@dataclass(frozen=True)
class SpectralProfile:
    """Everything classify_regime learns about a matrix."""

    char_poly: IntPolynomial
    min_poly: IntPolynomial
    d: int
    eigenvalues: tuple[complex, ...]
    factors: tuple[tuple[IntPolynomial, int], ...]
    root_orders: tuple[Optional[tuple[int, int]], ...]
    remainder: Optional[IntPolynomial]
    regime: Regime


def classify_regime(
    a: IntMatrix | Sequence[Sequence[int]], l_max: int = DEFAULT_L_MAX
) -> SpectralProfile:
    """Classify the spectral regime of an invertible integer matrix.

    Regimes, checked in order:
      RootsOfIntegerExpanding  every irreducible factor has x**l = m with m >= 2
      UnitRootMixed            every factor has such an order (any m >= 1)
      UnitRootTorsion          some factor has an order with m = 1, others none
      NonUnitModulus           no eigenvalue within TOL_UNIT of the unit circle
      Unknown                  anything else, including incomplete factorization
    """
    a = as_matrix(a)
    if det_int(a) == 0:
        raise SingularMatrix("matrix is singular; the recursion would not be bijective")
    cp = char_poly(a)
    mp = minimal_poly(a)
    factors, remainder = factor_int_poly(cp)
    eigs = eigenvalues(cp)
    orders = tuple(root_of_integer_order(poly, l_max) for poly, _ in factors)
    if remainder is not None:
        regime = Regime.UNKNOWN
    elif all(o is not None for o in orders) and all(o[1] >= 2 for o in orders):
        regime = Regime.ROOTS_OF_INTEGER_EXPANDING
    elif all(o is not None for o in orders):
        regime = Regime.UNIT_ROOT_MIXED
    elif any(o is not None and o[1] == 1 for o in orders):
        regime = Regime.UNIT_ROOT_TORSION
    elif all(abs(abs(z) - 1.0) > TOL_UNIT for z in eigs):
        regime = Regime.NON_UNIT_MODULUS
    else:
        regime = Regime.UNKNOWN
    return SpectralProfile(
        char_poly=cp,
        min_poly=mp,
        d=mp.degree,
        eigenvalues=eigs,
        factors=factors,
        root_orders=orders,
        remainder=remainder,
        regime=regime,
    )


def canonical_eigenvalue_order(a: IntMatrix | Sequence[Sequence[int]]) -> tuple[complex, ...]:
    """Eigenvalues ordered so the first d are the minimal polynomial's roots.

    The power expansion identities need the leading block of the ordering to
    multiply out to an annihilating product; roots of the minimal polynomial,
    taken with its multiplicities, guarantee that.  The remaining roots are
    those of char_poly / min_poly.

    All values are exact where the factorization allows and residual-checked
    otherwise.
    """
    a = as_matrix(a)
    cp = char_poly(a)
    mp = minimal_poly(a)
    head = list(eigenvalues(mp))
    quotient, rem = poly_divmod(cp, mp)
    assert rem.is_zero
    tail = list(eigenvalues(quotient)) if quotient.degree >= 1 else []
    return tuple(head + tail)


def _complete_homogeneous(s: int, lams: Sequence[complex]):
    """Complete homogeneous symmetric polynomial h_s of the given values."""
    if s < 0:
        return 0
    h = [1] + [0] * s
    for v in lams:
        for t in range(1, s + 1):
            h[t] += v * h[t - 1]
    return h[s]


def _generic_mat_mul(a, b):
    n = len(a)
    return [[sum(a[i][t] * b[t][j] for t in range(n)) for j in range(n)] for i in range(n)]


def _generic_identity(n, one=1):
    return [[one if i == j else 0 for j in range(n)] for i in range(n)]


def _generic_scale_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _generic_shift(a, lam):
    """a - lam * I."""
    n = len(a)
    return [[a[i][j] - (lam if i == j else 0) for j in range(n)] for i in range(n)]


def _max_abs(a) -> float:
    return max(abs(complex(x)) for row in a for x in row)


def verify_spectral_identities(
    a: IntMatrix | Sequence[Sequence[int]],
    e: int,
    j: int,
    eigenvalue_order: Optional[Sequence[int]] = None,
) -> tuple[bool, float]:
    """Check the two power expansion identities for the transpose of A.

    With eigenvalues lam_1..lam_k ordered so the first d (d = degree of the
    minimal polynomial) are the minimal polynomial's roots, T = transpose(A),
    and P_e = prod_{i<=e} (T - lam_i I):

      identity 1:  T**e = P_e + sum_{s<e} lam_{s+1} * T**(e-s-1) * P_s
      identity 2:  T**j * P_e = sum_{h=e+1..d} h_{j-d+h}(lam_h..lam_d)
                                 * prod_{n=h+1..d} (T - lam_n I) * P_e

    where h_s is the complete homogeneous symmetric polynomial (h_s = 0 for
    s < 0, h_0 = 1).  Requires 1 <= e <= d and j >= 0.  eigenvalue_order is
    an optional permutation of range(k) applied to the canonical order; a
    permutation that breaks the leading-block property will simply fail the
    check.  Returns (ok, max residual); the computation is exact end to end
    when every eigenvalue is an integer.
    """
    a = as_matrix(a)
    k = a.k
    mp = minimal_poly(a)
    d = mp.degree
    if not 1 <= e <= d:
        raise ValueError(f"e must satisfy 1 <= e <= d = {d}")
    if j < 0:
        raise ValueError("j must be >= 0")
    lams = list(canonical_eigenvalue_order(a))
    if eigenvalue_order is not None:
        if sorted(eigenvalue_order) != list(range(k)):
            raise OrderMismatch(f"eigenvalue_order must be a permutation of range({k})")
        lams = [lams[i] for i in eigenvalue_order]
    exact = all(z.imag == 0 and float(z.real).is_integer() for z in lams)
    if exact:
        lam_vals: list = [int(z.real) for z in lams]
        t = [list(row) for row in a.transpose().rows]
    else:
        lam_vals = [complex(z) for z in lams]
        t = [[complex(x) for x in row] for row in a.transpose().rows]

    def mat_power(base, n):
        result = _generic_identity(k, one=1 if exact else complex(1))
        for _ in range(n):
            result = _generic_mat_mul(result, base)
        return result

    prods = [_generic_identity(k, one=1 if exact else complex(1))]
    for i in range(d):
        prods.append(_generic_mat_mul(prods[-1], _generic_shift(t, lam_vals[i])))

    lhs1 = mat_power(t, e)
    rhs1 = prods[e]
    for s in range(e):
        term = _generic_mat_mul(mat_power(t, e - s - 1), prods[s])
        scaled = [[lam_vals[s] * x for x in row] for row in term]
        rhs1 = _generic_scale_add(rhs1, scaled)

    lhs2 = _generic_mat_mul(mat_power(t, j), prods[e])
    rhs2 = [[0 if exact else complex(0) for _ in range(k)] for _ in range(k)]
    for h in range(e + 1, d + 1):
        coeff = _complete_homogeneous(j - d + h, lam_vals[h - 1 : d])
        if coeff == 0:
            continue
        tail = _generic_identity(k, one=1 if exact else complex(1))
        for n in range(h + 1, d + 1):
            tail = _generic_mat_mul(tail, _generic_shift(t, lam_vals[n - 1]))
        term = _generic_mat_mul(tail, prods[e])
        rhs2 = _generic_scale_add(rhs2, [[coeff * x for x in row] for row in term])

    res1 = _max_abs(_generic_scale_add(lhs1, [[-x for x in row] for row in rhs1]))
    res2 = _max_abs(_generic_scale_add(lhs2, [[-x for x in row] for row in rhs2]))
    residual = max(res1, res2)
    scale = max(1.0, _max_abs(lhs1), _max_abs(lhs2))
    return residual <= IDENTITY_RESIDUAL_TOL * scale, residual
