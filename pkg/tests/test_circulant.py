import cmath
import itertools
import math
import warnings
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fibcirc.circulant import (
    RatioCirculantParams,
    _det_F_statement_form,
    build_F_matrix,
    build_G_matrix,
    build_H_matrix,
    det_bareiss,
    det_bruteforce,
    det_closed_F,
    det_closed_G,
    det_closed_H,
    eigenvalues_closed_F,
    eigenvalues_dft,
    gcirc_from_row,
    h_ratio_degenerate,
    rcirc_from_row,
)
from fibcirc.errors import FallbackUsed, InvalidParameters, SingularDenominator
from fibcirc.polyseq import IntRecurrenceParams, RecurrenceParams, char_roots, fibonacci_seq
from fibcirc.selftest import draw_ratio_params, integer_grid

ONE = IntRecurrenceParams(1, 1)


def leibniz_det(rows):
    """Permutation expansion; independent of any elimination code."""
    n = len(rows)
    total = 0
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = -1 if inversions % 2 else 1
        for i, j in enumerate(perm):
            term *= rows[i][j]
        total += term
    return total


# construction


def test_rcirc_examples():
    assert rcirc_from_row([5]).to_rows() == [[5]]
    assert rcirc_from_row([1, 1, 2]).to_rows() == [[1, 1, 2], [2, 1, 1], [1, 2, 1]]
    assert rcirc_from_row([1, 3]).to_rows() == [[1, 3], [3, 1]]
    with pytest.raises(ValueError):
        rcirc_from_row([])


@pytest.mark.parametrize("n", range(1, 9))
def test_shift_invariance_exhaustive(n):
    row = list(range(10, 10 + n))
    m = rcirc_from_row(row)
    dense = m.to_rows()
    for i in range(n):
        for j in range(n):
            assert dense[i][j] == row[(j - i) % n] == m.entry(i, j)
        if i + 1 < n:
            assert dense[i + 1] == dense[i][-1:] + dense[i][:-1]


def test_gcirc_examples():
    assert gcirc_from_row([1, 1, 2], 1).to_rows() == rcirc_from_row([1, 1, 2]).to_rows()
    assert gcirc_from_row(["a", "b"], 0).to_rows() == [["a", "b"], ["a", "b"]]
    assert gcirc_from_row([1, 2, 3, 4], 2).to_rows() == [
        [1, 2, 3, 4],
        [3, 4, 1, 2],
        [1, 2, 3, 4],
        [3, 4, 1, 2],
    ]
    # g = n + 1 reduces to the right circulant
    assert gcirc_from_row([1, 2, 3], 4).to_rows() == rcirc_from_row([1, 2, 3]).to_rows()


@settings(max_examples=50)
@given(st.lists(st.floats(-1e3, 1e3, allow_nan=False), min_size=1, max_size=12))
def test_gcirc_g1_bit_identical(row):
    assert gcirc_from_row(row, 1).to_rows() == rcirc_from_row(row).to_rows()


def test_build_F_examples():
    rp = RatioCirculantParams(RecurrenceParams(1, 1), 1, 2, 2)
    assert build_F_matrix(rp).first_row == (0.0, 0.5)
    rp = RatioCirculantParams(RecurrenceParams(1, 1), 2, 1.5, 1)
    assert build_F_matrix(rp).first_row == (0.0,)
    rp = RatioCirculantParams(RecurrenceParams(1, 1), 2, 1, 3)
    assert build_F_matrix(rp).first_row == (0.0, 0.5, 0.5)


def test_ratio_params_guard():
    alpha = char_roots(RecurrenceParams(1, 1)).alpha
    with pytest.raises(InvalidParameters):
        RatioCirculantParams(RecurrenceParams(1, 1), 1, alpha, 3)
    with pytest.raises(InvalidParameters):
        RatioCirculantParams(RecurrenceParams(1, 1), 0, 2, 3)
    with pytest.raises(InvalidParameters):
        RatioCirculantParams(RecurrenceParams(1, 1), 1, 2, 0)


def test_build_G_H_examples():
    assert build_G_matrix(ONE, 3).first_row == (1, 1, 2)
    assert build_G_matrix(ONE, 2).to_rows() == [[1, 1], [1, 1]]
    assert build_G_matrix(ONE, 4).first_row == (1, 1, 2, 3)
    assert build_H_matrix(ONE, 2).to_rows() == [[1, 3], [3, 1]]
    assert build_H_matrix(ONE, 4).first_row == (1, 3, 4, 7)
    assert build_H_matrix(IntRecurrenceParams(3, -2), 3).first_row == (3, 5, 9)


def test_dense_cap():
    with pytest.raises(ValueError):
        rcirc_from_row([0] * 4097).to_rows()


# determinant oracle


def test_det_bruteforce_examples():
    assert det_bruteforce([[1, 1], [1, 1]]) == 0
    assert det_bruteforce([[1, 1, 2], [2, 1, 1], [1, 2, 1]]) == 4
    assert det_bruteforce([[1, 3], [3, 1]]) == -8


def test_bareiss_needs_row_swap():
    rows = [[0, 2, 1], [3, 0, 4], [1, 5, 0]]
    assert det_bareiss(rows) == leibniz_det(rows)
    assert det_bareiss([[0, 0], [0, 1]]) == 0


@settings(max_examples=150)
@given(
    st.integers(1, 6).flatmap(
        lambda n: st.lists(st.lists(st.integers(-50, 50), min_size=n, max_size=n), min_size=n, max_size=n)
    )
)
def test_bareiss_matches_leibniz(rows):
    assert det_bruteforce(rows) == leibniz_det(rows)


def test_bareiss_fractions():
    rows = [[Fraction(1, 2), Fraction(1, 3)], [Fraction(1, 4), Fraction(2, 5)]]
    assert det_bruteforce(rows) == Fraction(1, 5) - Fraction(1, 12)


def test_float_elimination_accuracy():
    rng = np.random.default_rng(3)
    for n in range(1, 13):
        a = rng.uniform(-1e3, 1e3, size=(n, n))
        exact = det_bareiss([[Fraction(v) for v in row] for row in a.tolist()])
        got = det_bruteforce(a)
        assert abs(got - float(exact)) <= 1e-9 * abs(float(exact))


def test_numpy_integer_arrays_are_exact():
    a = np.array([[1, 1, 2], [2, 1, 1], [1, 2, 1]])
    assert det_bruteforce(a) == 4
    assert type(det_bruteforce(a)) is int


# spectra


def test_dft_examples():
    assert eigenvalues_dft(rcirc_from_row([2.5])).eigenvalues == (2.5 + 0j,)
    spec = eigenvalues_dft(rcirc_from_row([0, 0.5]))
    assert spec[0] == pytest.approx(0.5)
    assert spec[1] == pytest.approx(-0.5)
    spec = eigenvalues_dft(rcirc_from_row([1, 1, 2]))
    w = cmath.exp(2j * math.pi / 3)
    assert spec[0] == pytest.approx(4)
    assert spec[1] == pytest.approx(1 + w**-1 + 2 * w**-2)
    assert spec[2] == pytest.approx(spec[1].conjugate())
    assert spec.product() == pytest.approx(4)


def test_dft_eigenpairs():
    # C v_m = lambda_m v_m with v_m[j] = w^(-m j)
    rng = np.random.default_rng(11)
    for n in range(1, 13):
        row = rng.uniform(-5, 5, size=n)
        c = rcirc_from_row(row.tolist()).to_array()
        spec = eigenvalues_dft(rcirc_from_row(row.tolist()))
        for m in range(n):
            v = np.exp(-2j * np.pi * m * np.arange(n) / n)
            np.testing.assert_allclose(c @ v, spec[m] * v, atol=1e-10 * np.abs(row).sum())


def test_spectral_completeness():
    rng = np.random.default_rng(5)
    for _ in range(200):
        n = int(rng.integers(1, 13))
        row = rng.uniform(-10, 10, size=n).tolist()
        m = rcirc_from_row(row)
        prod = eigenvalues_dft(m).product()
        det = det_bruteforce(m.to_rows())
        assert abs(prod - det) <= 1e-6 * abs(det)
        assert abs(prod.imag) <= 1e-6 * abs(det)


def test_closed_eigenvalue_examples():
    rp = RatioCirculantParams(RecurrenceParams(1, 1), 1, 2, 1)
    assert eigenvalues_closed_F(rp).eigenvalues == (0,)
    rp = RatioCirculantParams(RecurrenceParams(1, 1), 1, 2, 2)
    spec = eigenvalues_closed_F(rp)
    assert spec[0] == pytest.approx(0.5, rel=1e-12)
    assert spec[1] == pytest.approx(-0.5, rel=1e-12)


def test_closed_eigenvalue_singular_guard():
    # r = -beta hits r - beta w^-m = 0 at m = n/2
    beta = char_roots(RecurrenceParams(1, 1)).beta
    rp = RatioCirculantParams(RecurrenceParams(1, 1), 1, -beta, 4)
    with pytest.raises(SingularDenominator) as info:
        eigenvalues_closed_F(rp)
    assert "beta" in info.value.factor


def test_closed_eigenvalues_match_dft_random():
    import random

    rng = random.Random(99)
    for _ in range(200):
        rp = draw_ratio_params(rng)
        closed = eigenvalues_closed_F(rp)
        oracle = eigenvalues_dft(build_F_matrix(rp))
        for c, o in zip(closed, oracle):
            assert abs(c - o) <= 1e-8 * abs(o) if o != 0 else abs(c) <= 1e-12


# ratio determinant


def test_det_F_examples():
    rp = RatioCirculantParams(RecurrenceParams(1, 1), 1, 2, 2)
    assert det_closed_F(rp) == pytest.approx(-0.25, rel=1e-12)
    assert det_bruteforce(build_F_matrix(rp).to_rows()) == pytest.approx(-0.25, rel=1e-12)
    rp = RatioCirculantParams(RecurrenceParams(2.5, 1), 1.3, 0.7, 1)
    assert det_closed_F(rp) == 0


def test_statement_form_denominator_disagrees():
    rp = RatioCirculantParams(RecurrenceParams(1, 1), 1, 2, 2)
    # -5 / (4 - 5) instead of -5 / (4 * 5)
    assert _det_F_statement_form(rp) == pytest.approx(5.0)
    assert det_closed_F(rp) != pytest.approx(_det_F_statement_form(rp))


def test_det_F_singular_guard():
    # r^n = alpha^n makes r^2n - r^n L_n + (-q)^n vanish; for n = 2 take r = -alpha
    alpha = char_roots(RecurrenceParams(1, 1)).alpha
    rp = RatioCirculantParams(RecurrenceParams(1, 1), 1, -alpha, 2)
    with pytest.raises(SingularDenominator):
        det_closed_F(rp)


def test_det_F_consistency_with_closed_eigenvalues():
    import random

    rng = random.Random(4)
    for _ in range(200):
        rp = draw_ratio_params(rng)
        det = det_closed_F(rp)
        prod = eigenvalues_closed_F(rp).product()
        assert abs(prod - det) <= 1e-8 * abs(det) if det != 0 else abs(prod) <= 1e-12


# G_n and H_n


@pytest.mark.parametrize("n, expected", [(1, 1), (2, 0), (3, 4), (4, -35)])
def test_det_G_pins(n, expected):
    assert leibniz_det(build_G_matrix(ONE, n).to_rows()) == expected
    assert det_closed_G(ONE, n) == expected


@pytest.mark.parametrize("n, expected", [(1, 1), (2, -8)])
def test_det_H_pins(n, expected):
    assert leibniz_det(build_H_matrix(ONE, n).to_rows()) == expected
    assert det_closed_H(ONE, n) == expected


def test_det_H3():
    rows = rcirc_from_row([1, 3, 4]).to_rows()
    assert det_closed_H(ONE, 3) == leibniz_det(rows) == 56


@pytest.mark.parametrize("params", list(integer_grid()), ids=lambda p: f"p{p.p}q{p.q}")
def test_closed_G_H_exact_on_grid(params):
    for n in range(1, 9):
        g = det_closed_G(params, n)
        h = det_closed_H(params, n)
        assert type(g) is int and type(h) is int
        assert g == det_bareiss(build_G_matrix(params, n).to_rows())
        assert h == det_bareiss(build_H_matrix(params, n).to_rows())
        # q F_n never vanishes under the standing assumptions
        assert params.q * fibonacci_seq(params, n + 1)[n] != 0


def test_closed_G_H_float_mode():
    params = RecurrenceParams(1.7, 0.4)
    for n in range(1, 9):
        for closed, build in ((det_closed_G, build_G_matrix), (det_closed_H, build_H_matrix)):
            want = det_bruteforce(build(params, n).to_rows())
            assert closed(params, n) == pytest.approx(want, rel=1e-9, abs=1e-9)


def test_det_H_fallback_when_ratio_degenerates():
    # L_2 = p^2 + 2q = 2
    params = RecurrenceParams(1, 0.5)
    assert h_ratio_degenerate(params, 2)
    with pytest.warns(FallbackUsed):
        value = det_closed_H(params, 2)
    assert value == pytest.approx(det_bruteforce(build_H_matrix(params, 2).to_rows()))


def test_det_H_n1_is_p():
    for params in integer_grid():
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            assert det_closed_H(params, 1) == params.p
