"""Exact integer linear algebra and spectral classification tests.

Oracles used here are deliberately independent of the implementation:
Laplace expansion for determinants, Fraction-based elimination for rank,
and direct evaluation for polynomial identities.
"""

from __future__ import annotations

import random
from fractions import Fraction
from math import isqrt

import pytest

from affine_mixer import (
    IntMatrix,
    IntPolynomial,
    OrderMismatch,
    Regime,
    SingularMatrix,
    canonical_eigenvalue_order,
    char_poly,
    classify_regime,
    det_int,
    eigenvalues,
    factor_int_poly,
    inf_norm,
    mat_pow,
    mat_pow_mod,
    minimal_poly,
    root_of_integer_order,
)
from affine_mixer.algebra import (
    int_rank,
    integer_kernel_vector,
    poly_divmod,
    poly_eval_matrix,
    poly_mul,
)
from common import SUITE_ROWS, suite_matrices


def laplace_det(rows):
    """Determinant by cofactor expansion along the first row. Exact, slow."""
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = 0
    for j in range(n):
        minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
        sign = -1 if j % 2 else 1
        total += sign * rows[0][j] * laplace_det(minor)
    return total


def fraction_rank(vectors):
    """Row rank over Q via Gaussian elimination with Fractions."""
    rows = [[Fraction(x) for x in v] for v in vectors]
    rank = 0
    cols = len(rows[0]) if rows else 0
    for col in range(cols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = rows[rank][col]
        rows[rank] = [x / inv for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col] != 0:
                factor = rows[i][col]
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def random_int_matrix(rng, k, lo=-5, hi=5):
    return IntMatrix.from_rows(
        [[rng.randint(lo, hi) for _ in range(k)] for _ in range(k)]
    )


def test_det_hand_values():
    assert det_int(IntMatrix.from_rows([[7]])) == 7
    assert det_int(IntMatrix.from_rows([[2, 1], [1, 1]])) == 1
    assert det_int(IntMatrix.from_rows([[0, 1], [2, 0]])) == -2
    assert det_int(IntMatrix.from_rows([[1, 2, 3], [4, 5, 6], [7, 8, 10]])) == -3


def test_det_matches_laplace_oracle():
    rng = random.Random(101)
    for _ in range(200):
        k = rng.randint(1, 4)
        a = random_int_matrix(rng, k)
        assert det_int(a) == laplace_det([list(r) for r in a.rows])


def test_int_rank_matches_fraction_oracle():
    rng = random.Random(202)
    for _ in range(200):
        k = rng.randint(1, 4)
        n = rng.randint(1, 5)
        vecs = [tuple(rng.randint(-4, 4) for _ in range(k)) for _ in range(n)]
        assert int_rank(vecs) == fraction_rank(vecs)


def test_integer_kernel_vector_properties():
    cases = [
        [[2, 4], [1, 2]],
        [[0, 0], [0, 0]],
        [[1, 1, 1], [2, 2, 2], [0, 1, 0]],
        [[3, -3], [-1, 1]],
    ]
    for rows in cases:
        a = IntMatrix.from_rows(rows)
        v = integer_kernel_vector(a)
        assert v is not None
        assert any(x != 0 for x in v)
        image = a.apply(v)
        assert all(x == 0 for x in image)
        from math import gcd

        g = 0
        for x in v:
            g = gcd(g, x)
        assert g == 1
        first = next(x for x in v if x != 0)
        assert first > 0


def test_integer_kernel_vector_rejects_invertible():
    a = IntMatrix.from_rows([[2, 1], [1, 1]])
    with pytest.raises(ValueError):
        integer_kernel_vector(a)


def test_char_poly_hand_values():
    # char polys are monic; coefficients are listed lowest degree first
    assert char_poly(IntMatrix.from_rows([[2]])).coeffs == (-2, 1)
    assert char_poly(IntMatrix.from_rows([[0, 1], [2, 0]])).coeffs == (-2, 0, 1)
    assert char_poly(IntMatrix.from_rows([[2, 1], [1, 1]])).coeffs == (1, -3, 1)
    assert char_poly(IntMatrix.from_rows([[0, -1], [1, 0]])).coeffs == (1, 0, 1)


def test_char_poly_matches_laplace_at_integer_points():
    rng = random.Random(303)
    for _ in range(60):
        k = rng.randint(1, 4)
        a = random_int_matrix(rng, k)
        f = char_poly(a)
        assert f.is_monic and f.degree == k
        for t in range(-3, 4):
            shifted = [
                [t * (1 if i == j else 0) - a.rows[i][j] for j in range(k)]
                for i in range(k)
            ]
            assert f.evaluate(t) == laplace_det(shifted)


def test_cayley_hamilton():
    rng = random.Random(404)
    for _ in range(80):
        k = rng.randint(1, 4)
        a = random_int_matrix(rng, k)
        image = poly_eval_matrix(char_poly(a), a)
        assert all(all(x == 0 for x in row) for row in image.rows)


def test_minimal_poly_divides_char_and_annihilates():
    rng = random.Random(505)
    for _ in range(80):
        k = rng.randint(1, 4)
        a = random_int_matrix(rng, k)
        m = minimal_poly(a)
        assert m.is_monic
        _, rem = poly_divmod(char_poly(a), m)
        assert rem.degree == -1
        image = poly_eval_matrix(m, a)
        assert all(all(x == 0 for x in row) for row in image.rows)
        # minimality: I, A, ..., A^{d-1} are linearly independent
        d = m.degree
        flats = []
        for j in range(d):
            pj = mat_pow(a, j)
            flats.append(tuple(x for row in pj.rows for x in row))
        assert int_rank(flats) == d


def test_minimal_poly_defective_block():
    a = IntMatrix.from_rows([[2, 1], [0, 2]])
    assert minimal_poly(a).coeffs == (4, -4, 1)
    b = IntMatrix.from_rows([[2, 0], [0, 2]])
    assert minimal_poly(b).coeffs == (-2, 1)


def test_poly_divmod_roundtrip():
    rng = random.Random(606)
    for _ in range(100):
        dq = rng.randint(0, 3)
        dd = rng.randint(0, 3)
        q = IntPolynomial(tuple(rng.randint(-4, 4) for _ in range(dq)) + (1,))
        d = IntPolynomial(tuple(rng.randint(-4, 4) for _ in range(dd)) + (1,))
        r_coeffs = tuple(rng.randint(-4, 4) for _ in range(d.degree))
        r = IntPolynomial(r_coeffs)
        f = IntPolynomial(
            tuple(
                x + y
                for x, y in zip(
                    poly_mul(q, d).coeffs,
                    r.coeffs + (0,) * (len(poly_mul(q, d).coeffs) - len(r.coeffs)),
                )
            )
        )
        q2, r2 = poly_divmod(f, d)
        assert q2 == q
        assert r2 == r


def test_factor_int_poly_reassembles():
    rng = random.Random(707)
    atoms = [
        IntPolynomial((-1, 1)),
        IntPolynomial((2, 1)),
        IntPolynomial((1, 0, 1)),
        IntPolynomial((-2, 0, 1)),
        IntPolynomial((1, -3, 1)),
    ]
    for _ in range(60):
        picks = [rng.choice(atoms) for _ in range(rng.randint(1, 3))]
        f = IntPolynomial((1,))
        for g in picks:
            f = poly_mul(f, g)
        if f.degree > 4:
            continue
        factors, remainder = factor_int_poly(f)
        assert remainder is None
        rebuilt = IntPolynomial((1,))
        for g, mult in factors:
            for _ in range(mult):
                rebuilt = poly_mul(rebuilt, g)
        assert rebuilt == f
        for g, _ in factors:
            sub = factor_int_poly(g)[0]
            assert sub == ((g, 1),)


def test_factor_int_poly_quartic_split():
    # (x^2+1)(x^2-2) has no rational roots, so the quartic splitter must act
    f = poly_mul(IntPolynomial((1, 0, 1)), IntPolynomial((-2, 0, 1)))
    factors, remainder = factor_int_poly(f)
    assert remainder is None
    assert set(g.coeffs for g, _ in factors) == {(1, 0, 1), (-2, 0, 1)}


def test_factor_int_poly_degree_five_remainder():
    f = IntPolynomial((-1, -1, 0, 0, 0, 1))  # x^5 - x - 1, no rational roots
    factors, remainder = factor_int_poly(f)
    assert factors == ()
    assert remainder == f


def test_eigenvalues_hand_values():
    lams = eigenvalues(IntPolynomial((1, -3, 1)))
    lo, hi = (3 - 5 ** 0.5) / 2, (3 + 5 ** 0.5) / 2
    assert abs(lams[0] - lo) < 1e-12 and abs(lams[1] - hi) < 1e-12
    lams = eigenvalues(IntPolynomial((1, 0, 1)))
    assert lams[0] == complex(0.0, -1.0) and lams[1] == complex(0.0, 1.0)
    lams = eigenvalues(IntPolynomial((-2, 0, 0, 1)))
    reals = [z for z in lams if z.imag == 0]
    assert len(reals) == 1 and abs(reals[0].real - 2 ** (1 / 3)) < 1e-12


def test_eigenvalues_repeated_roots_kept():
    f = poly_mul(poly_mul(IntPolynomial((-2, 1)), IntPolynomial((-2, 1))), IntPolynomial((-3, 1)))
    lams = eigenvalues(f)
    assert [round(z.real) for z in lams] == [2, 2, 3]


def test_eigenvalues_vieta():
    rng = random.Random(808)
    for _ in range(60):
        deg = rng.randint(1, 4)
        coeffs = tuple(rng.randint(-5, 5) for _ in range(deg)) + (1,)
        f = IntPolynomial(coeffs)
        lams = eigenvalues(f)
        prod = complex(1.0)
        total = complex(0.0)
        for z in lams:
            prod *= z
            total += z
        sign = -1 if deg % 2 else 1
        assert abs(prod - sign * coeffs[0]) < 1e-6 * max(1, abs(coeffs[0]))
        assert abs(total - (-coeffs[deg - 1])) < 1e-6 * max(1, abs(coeffs[deg - 1]))


def test_eigenvalues_conjugate_pairing_exact():
    lams = eigenvalues(IntPolynomial((2, -2, 1)))  # 1 +- i
    assert lams[0].real == lams[1].real
    assert lams[0].imag == -lams[1].imag


def test_root_of_integer_order():
    assert root_of_integer_order(IntPolynomial((-2, 1))) == (1, 2)
    assert root_of_integer_order(IntPolynomial((-2, 0, 1))) == (2, 2)
    assert root_of_integer_order(IntPolynomial((1, 0, 1))) == (4, 1)
    assert root_of_integer_order(IntPolynomial((-1, 1))) == (1, 1)
    assert root_of_integer_order(IntPolynomial((1, -3, 1))) is None
    # l_max is a hard cutoff
    assert root_of_integer_order(IntPolynomial((1, 0, 1)), l_max=3) is None


def test_root_of_integer_order_matches_power_oracle():
    # independent check: reduce x^l mod f by square-and-multiply on coefficients
    def pow_mod(f, l):
        from affine_mixer.algebra import X_POLY, poly_mod

        result = IntPolynomial((1,))
        base = poly_mod(X_POLY, f)
        e = l
        while e:
            if e & 1:
                result = poly_mod(poly_mul(result, base), f)
            base = poly_mod(poly_mul(base, base), f)
            e >>= 1
        return result

    cases = [IntPolynomial((-2, 1)), IntPolynomial((-2, 0, 1)), IntPolynomial((1, 0, 1))]
    for f in cases:
        l, m = root_of_integer_order(f)
        reduced = pow_mod(f, l)
        assert reduced.coeffs == (m,)
        for shorter in range(1, l):
            r = pow_mod(f, shorter)
            assert not (r.degree == 0 and r.coeffs[0] >= 1)


def test_mat_pow_mod_matches_exact():
    rng = random.Random(909)
    for _ in range(60):
        k = rng.randint(1, 3)
        a = random_int_matrix(rng, k)
        n = rng.randint(0, 12)
        p = rng.choice([2, 3, 5, 7, 11])
        exact = mat_pow(a, n)
        reduced = mat_pow_mod(a, n, p)
        for i in range(k):
            for j in range(k):
                assert reduced.rows[i][j] == exact.rows[i][j] % p


def test_inf_norm():
    assert inf_norm(IntMatrix.from_rows([[2]])) == 2
    assert inf_norm(IntMatrix.from_rows([[0, -1], [1, 0]])) == 1
    assert inf_norm(IntMatrix.from_rows([[2, 1], [1, 1]])) == 3


EXPECTED_REGIMES = {
    ((2,),): Regime.ROOTS_OF_INTEGER_EXPANDING,
    ((1,),): Regime.UNIT_ROOT_MIXED,
    ((0, 1), (2, 0)): Regime.ROOTS_OF_INTEGER_EXPANDING,
    ((2, 1), (1, 1)): Regime.NON_UNIT_MODULUS,
    ((1, 0), (0, 2)): Regime.UNIT_ROOT_MIXED,
    ((0, -1), (1, 0)): Regime.UNIT_ROOT_MIXED,
}


@pytest.mark.parametrize("rows", SUITE_ROWS)
def test_classify_regime_suite(rows):
    profile = classify_regime(IntMatrix.from_rows(rows))
    assert profile.regime == EXPECTED_REGIMES[rows]


def test_classify_regime_profile_contents():
    profile = classify_regime(IntMatrix.from_rows([[0, 1], [2, 0]]))
    assert profile.char_poly.coeffs == (-2, 0, 1)
    assert profile.min_poly.coeffs == (-2, 0, 1)
    assert profile.d == 2
    assert profile.root_orders == ((2, 2),)
    assert profile.remainder is None


def test_classify_regime_torsion():
    # companion matrix of (x^2+1)(x^2-3x+1): one torsion factor, one
    # factor with no integer-order root, no expanding integer root
    a = IntMatrix.from_rows(
        [[0, 0, 0, -1], [1, 0, 0, 3], [0, 1, 0, -2], [0, 0, 1, 3]]
    )
    profile = classify_regime(a)
    assert profile.regime == Regime.UNIT_ROOT_TORSION


def test_classify_regime_unknown_on_unfactored_remainder():
    # companion matrix of x^5 - x - 1 (irreducible over Q, degree five)
    a = IntMatrix.from_rows(
        [
            [0, 0, 0, 0, 1],
            [1, 0, 0, 0, 1],
            [0, 1, 0, 0, 0],
            [0, 0, 1, 0, 0],
            [0, 0, 0, 1, 0],
        ]
    )
    profile = classify_regime(a)
    assert profile.remainder is not None
    assert profile.regime == Regime.UNKNOWN


def test_classify_regime_unknown_salem():
    # companion matrix of x^4 - 2x^3 - 2x + 1: two eigenvalues sit exactly on
    # the unit circle but are not roots of unity, so no branch applies
    a = IntMatrix.from_rows(
        [[0, 0, 0, -1], [1, 0, 0, 2], [0, 1, 0, 0], [0, 0, 1, 2]]
    )
    profile = classify_regime(a)
    assert profile.remainder is None
    assert profile.root_orders == (None,)
    assert profile.regime == Regime.UNKNOWN


def test_classify_regime_rejects_singular():
    with pytest.raises(SingularMatrix):
        classify_regime(IntMatrix.from_rows([[1, 1], [1, 1]]))


def test_canonical_eigenvalue_order_minimal_first():
    a = IntMatrix.from_rows([[2, 0, 0], [0, 2, 0], [0, 0, 3]])
    order = canonical_eigenvalue_order(a)
    assert [round(z.real) for z in order] == [2, 3, 2]


@pytest.mark.parametrize("rows", SUITE_ROWS)
def test_spectral_identities_suite(rows):
    from affine_mixer import minimal_poly, verify_spectral_identities

    a = IntMatrix.from_rows(rows)
    d = minimal_poly(a).degree
    for e in range(1, d + 1):
        for j in range(0, 11):
            ok, residual = verify_spectral_identities(a, e, j)
            assert ok, (rows, e, j, residual)
            assert residual <= 1e-8


def test_spectral_identities_exact_integer_path():
    from affine_mixer import verify_spectral_identities

    ok, residual = verify_spectral_identities(IntMatrix.from_rows([[2]]), 1, 7)
    assert ok and residual == 0.0


def test_spectral_identities_rejects_bad_permutation():
    from affine_mixer import verify_spectral_identities

    a = IntMatrix.from_rows([[1, 0], [0, 2]])
    with pytest.raises(OrderMismatch):
        verify_spectral_identities(a, 1, 2, eigenvalue_order=(0, 0))
    with pytest.raises(OrderMismatch):
        verify_spectral_identities(a, 1, 2, eigenvalue_order=(0, 1, 2))


def test_spectral_identities_valid_permutation_of_equal_roots():
    # permuting within the minimal block keeps the identities true
    from affine_mixer import verify_spectral_identities

    a = IntMatrix.from_rows([[1, 0], [0, 2]])
    ok, residual = verify_spectral_identities(a, 1, 3, eigenvalue_order=(1, 0))
    assert ok and residual <= 1e-8


def test_spectral_identities_detects_wrong_minimal_prefix():
    # moving a repeated root into the leading block displaces the minimal
    # polynomial's roots, the annihilating product breaks, and the checker
    # must report a genuine failure rather than masking it
    from affine_mixer import verify_spectral_identities

    a = IntMatrix.from_rows([[2, 0, 0], [0, 2, 0], [0, 0, 3]])
    # canonical order is (2, 3, 2); this permutation makes the prefix (2, 2)
    ok, residual = verify_spectral_identities(a, 1, 4, eigenvalue_order=(0, 2, 1))
    assert not ok
    assert residual > 1e-8


def test_spectral_identities_argument_range():
    from affine_mixer import verify_spectral_identities

    a = IntMatrix.from_rows([[2]])
    with pytest.raises(ValueError):
        verify_spectral_identities(a, 0, 1)
    with pytest.raises(ValueError):
        verify_spectral_identities(a, 2, 1)
    with pytest.raises(ValueError):
        verify_spectral_identities(a, 1, -1)


def test_eigenvalue_residual_guard():
    lams = eigenvalues(IntPolynomial((-2, 0, 1)))
    f = IntPolynomial((-2, 0, 1))
    for z in lams:
        assert abs(f.evaluate(z)) <= 1e-9 * max(1.0, abs(z)) ** 2 * 3


def test_isqrt_based_quadratic_roots_exact():
    # perfect square discriminant must produce exact integer-valued floats
    lams = eigenvalues(IntPolynomial((6, -5, 1)))  # (x-2)(x-3)
    assert lams[0] == complex(2.0) and lams[1] == complex(3.0)
