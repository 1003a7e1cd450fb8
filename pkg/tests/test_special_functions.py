from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import laguerre_direct_sum
from trapped_nlcs.special_functions import (
    NonlinearityProfile,
    SingularNonlinearityError,
    f_even_product,
    f_odd_product,
    laguerre,
    laguerre_table,
    trapped_ion_F,
)


def test_laguerre_degree_zero_is_one():
    assert laguerre(0, 2, 0.25) == 1.0


@pytest.mark.parametrize("n, m, x, expected", [(1, 0, 0.01, 0.99), (1, 2, 0.04, 2.96)])
def test_laguerre_first_degree(n, m, x, expected):
    assert laguerre(n, m, x) == pytest.approx(expected, rel=1e-15)
    assert laguerre_direct_sum(n, m, x) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize("n, m", [(-1, 0), (0, -1), (1.5, 0)])
def test_laguerre_rejects_bad_indices(n, m):
    with pytest.raises(ValueError):
        laguerre(n, m, 0.1)


def test_laguerre_rejects_negative_argument():
    with pytest.raises(ValueError):
        laguerre(3, 0, -0.1)


@pytest.mark.parametrize("m", [0, 1, 2, 5])
@pytest.mark.parametrize("x", [0.0, 0.0001, 0.04, 1.0, 3.7])
def test_table_matches_direct_sum(m, x):
    table = laguerre_table(30, m, x)
    expected = [laguerre_direct_sum(n, m, x) for n in range(31)]
    np.testing.assert_allclose(table, expected, rtol=1e-10, atol=1e-14)


def test_laguerre_at_zero_is_binomial():
    # L_n^m(0) = C(n+m, n)
    assert laguerre(10, 2, 0.0) == 66.0


@given(st.integers(0, 25), st.sampled_from([0, 2]), st.floats(0.0, 4.0))
def test_recurrence_against_exact_sum(n, m, x):
    exact = laguerre_direct_sum(n, m, x)
    assert laguerre(n, m, x) == pytest.approx(exact, rel=1e-9, abs=1e-12)


def test_trapped_ion_F_at_zero_is_half():
    for eta in (1e-3, 0.1, 0.7):
        assert trapped_ion_F(0, eta) == pytest.approx(0.5, rel=1e-15)


def test_trapped_ion_F_first_level():
    # L_1^2(0.04) = 2.96, L_1^0(0.04) = 0.96
    expected = float(Fraction("2.96") / (6 * Fraction("0.96")))
    assert trapped_ion_F(1, 0.2) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("n", range(21))
def test_trapped_ion_F_small_eta_limit(n):
    assert abs(trapped_ion_F(n, 1e-4) - 0.5) < 1e-6


def test_trapped_ion_F_singular_denominator():
    # L_1^0(x) = 1 - x vanishes at eta = 1
    with pytest.raises(SingularNonlinearityError, match="n=1"):
        trapped_ion_F(1, 1.0)


def test_trapped_ion_F_rejects_nonpositive_eta():
    with pytest.raises(ValueError):
        trapped_ion_F(1, 0.0)


def test_profile_matches_pointwise_function():
    prof = NonlinearityProfile.trapped_ion(0.15, 40)
    assert prof.kind == "trapped_ion" and prof.eta == 0.15
    np.testing.assert_allclose(prof.values, [trapped_ion_F(n, 0.15) for n in range(40)], rtol=1e-14)


def test_profile_is_read_only():
    prof = NonlinearityProfile.constant(0.5, 8)
    with pytest.raises(ValueError):
        prof.values[0] = 1.0


def test_profile_rejects_zero_in_range():
    with pytest.raises(SingularNonlinearityError, match="L_n\\^0"):
        NonlinearityProfile.trapped_ion(1.0, 8)


def test_profile_rejects_nonfinite():
    with pytest.raises(SingularNonlinearityError):
        NonlinearityProfile([0.5, np.inf, 0.5])


@pytest.mark.parametrize("product", [f_even_product, f_odd_product])
def test_empty_products_are_unity(product):
    prof = NonlinearityProfile.trapped_ion(0.3, 10)
    assert product(prof, 0) == 1.0
    assert product(prof, -2) == 1.0


def test_products_of_constants():
    assert f_even_product(NonlinearityProfile.constant(1.0, 10), 3) == 1.0
    assert f_odd_product(NonlinearityProfile.constant(1.0, 10), 4) == 1.0
    assert f_even_product(NonlinearityProfile.constant(0.5, 10), 2) == pytest.approx(0.25, rel=1e-15)
    assert f_odd_product(NonlinearityProfile.constant(0.5, 10), 2) == pytest.approx(0.25, rel=1e-15)


def test_products_out_of_range():
    prof = NonlinearityProfile.constant(0.5, 5)
    assert f_even_product(prof, 3) == pytest.approx(0.125)  # uses F(4), the last entry
    with pytest.raises(IndexError):
        f_even_product(prof, 4)
    with pytest.raises(IndexError):
        f_odd_product(prof, 3)


def test_products_track_sign():
    prof = NonlinearityProfile([2.0, -1.0, -3.0, 0.5, 1.0])
    assert f_even_product(prof, 3) == pytest.approx(-6.0)
    assert f_odd_product(prof, 2) == pytest.approx(-0.5)


@given(st.lists(st.floats(0.05, 5.0), min_size=12, max_size=12), st.integers(0, 4))
def test_product_step_relation(values, n):
    prof = NonlinearityProfile(values)
    assert f_even_product(prof, n + 1) == pytest.approx(f_even_product(prof, n) * values[2 * n], rel=1e-12)
    assert f_odd_product(prof, n + 1) == pytest.approx(f_odd_product(prof, n) * values[2 * n + 1], rel=1e-12)


def test_named_profiles():
    np.testing.assert_allclose(NonlinearityProfile.squeezed_vacuum(4).values, [1, 1 / 2, 1 / 3, 1 / 4])
    np.testing.assert_allclose(NonlinearityProfile.squeezed_first_excited(3).values, [1 / 2, 1 / 3, 1 / 4])
