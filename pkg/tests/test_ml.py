import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from sigmaevo.errors import DomainError, PreconditionError, RangeError, UnsupportedCaseError
from sigmaevo.ml import (
    MLParams, gamma_fn, ml2_via_recurrence, ml3_eval, ml_eval, ml_podlubny_bound,
    ml_sandwich_bounds, mittag_leffler, podlubny_constant, sandwich_normaliser,
)


def mp_series(alpha, beta, z, gamma=1, dps=60, terms=5000):
    """Partial-sum oracle in extended precision."""
    with mp.workdps(dps):
        a, b, g, z = mp.mpf(alpha), mp.mpf(beta), mp.mpf(gamma), mp.mpc(z)
        total, k = mp.mpf(0), 0
        while k < terms:
            term = mp.rf(g, k) / mp.factorial(k) * z ** k * mp.rgamma(a * k + b)
            total += term
            if k > 10 and abs(term) < mp.mpf(10) ** (-dps + 5) * max(abs(total), 1):
                break
            k += 1
        return complex(total)


def rel(a, b):
    return abs(a - b) / abs(b)


# --- worked values ----------------------------------------------------------

def test_exponential_case():
    assert ml_eval(MLParams(1, 1), 1) == pytest.approx(2.718281828459045, rel=1e-14)


def test_cosh_case():
    assert ml_eval(MLParams(2, 1), 1).real == pytest.approx(1.543080634815244, rel=1e-13)


def test_zero_argument():
    assert ml_eval(MLParams(0.5, 1), 0) == 1


def test_erfc_case_with_quadrature_oracle():
    with mp.workdps(30):
        # erfc(2) from its defining integral
        erfc2 = 2 / mp.sqrt(mp.pi) * mp.quad(lambda s: mp.exp(-s * s), [2, mp.inf])
        ref = float(mp.exp(4) * erfc2)
    assert rel(ml_eval(MLParams(0.5, 1), -2).real, ref) < 1e-12


def test_three_parameter_kummer():
    # E^g_{1,b}(z) = 1F1(g; b; z) / Gamma(b)
    for b, g, z in [(1.5, 2.0, -1.3), (2.2, 0.7, 0.8), (1.0, 3.0, -4.0)]:
        ref = float(mp.hyp1f1(g, b, z) / mp.gamma(b))
        assert rel(ml3_eval(MLParams(1, b, g), z).real, ref) < 1e-11


def test_three_parameter_series_oracle():
    ref = mp_series(0.6, 1.4, -3, gamma=2)
    assert rel(ml3_eval(MLParams(0.6, 1.4, 2), -3), ref) < 1e-11


def test_gamma_one_matches_two_parameter_path():
    z = np.array([-3.0, 0.5 + 0.4j, 7j])
    a = mittag_leffler(0.7, 1.2, z)
    b = np.array([ml3_eval(MLParams(0.7, 1.2, 1.0), zz) for zz in z])
    assert np.array_equal(a, b)


def test_value_at_zero_is_reciprocal_gamma():
    for b in (0.3, 1.0, 2.5):
        assert ml_eval(MLParams(0.8, b), 0).real == pytest.approx(1 / math.gamma(b), rel=1e-15)


# --- accuracy envelopes -------------------------------------------------------

def negative_axis_oracle(alpha, beta, x):
    """Extended-precision reference for E_{a,b}(-x) with x > 0."""
    with mp.workdps(40):
        if beta == 1 and alpha < 1:
            # completely monotone case: Laplace-type integral representation
            s = mp.sin(mp.pi * alpha) / mp.pi
            c = mp.cos(mp.pi * alpha)
            xa = mp.mpf(x) ** (1 / mp.mpf(alpha))
            f = lambda r: r ** (alpha - 1) * mp.exp(-r * xa) / (r ** (2 * alpha) + 2 * r ** alpha * c + 1)
            return complex(s * mp.quad(f, [0, 1 / xa, 1, mp.inf]))
        if alpha == beta == 0.5:
            return complex(1 / mp.sqrt(mp.pi) - x * mp.exp(mp.mpf(x) ** 2) * mp.erfc(x))
    digits = int(x ** (1 / alpha) / 2.3) + 40
    return mp_series(alpha, beta, -x, dps=digits, terms=50000)


@pytest.mark.parametrize("alpha,beta", [(0.3, 1.0), (0.5, 0.5), (0.8, 1.7), (1.0, 2.0), (0.6, 1.2)])
def test_negative_axis_accuracy(alpha, beta):
    for x in (0.5, 3.0, 12.0, 30.0, 50.0):
        ref = negative_axis_oracle(alpha, beta, x)
        assert rel(ml_eval(MLParams(alpha, beta), -x), ref) < 1e-12


@pytest.mark.parametrize("alpha,beta", [(0.5, 1.0), (0.9, 0.9), (1.5, 1.0)])
def test_complex_plane_accuracy(alpha, beta):
    for z in (3j, -4 + 5j, 6 * np.exp(0.8j), 2 - 1j):
        ref = mp_series(alpha, beta, z, dps=80)
        assert rel(ml_eval(MLParams(alpha, beta), z), ref) < 1e-12


@pytest.mark.parametrize("alpha,beta", [(0.5, 0.5), (0.8, 0.8), (0.4, 1.0), (0.7, 1.9)])
def test_far_negative_axis_relative_accuracy(alpha, beta):
    # oracle: algebraic expansion in 40-digit arithmetic with many terms
    for x in (1e4, 1e8, 1e20):
        with mp.workdps(40):
            ref = -sum(mp.power(-x, -k) * mp.rgamma(beta - alpha * k) for k in range(1, 12))
        assert rel(ml_eval(MLParams(alpha, beta), -x).real, float(ref)) < 1e-12


def test_overflow_is_reported():
    with pytest.raises(RangeError):
        mittag_leffler(0.5, 1.0, 1e4 + 0j)


def test_rejects_bad_alpha():
    with pytest.raises(DomainError):
        MLParams(-1.0)


# --- identities ------------------------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(st.floats(0.2, 1.5), st.floats(0.3, 2.5), st.floats(-8, 3), st.floats(-3, 3))
def test_shift_identity(alpha, beta, x, y):
    # z E_{a,b}(z) - E_{a,b-a}(z) + 1/Gamma(b-a) = 0
    if abs((alpha - beta) - round(alpha - beta)) < 1e-6 and round(alpha - beta) >= 0:
        return
    z = complex(x, y)
    lhs = z * ml_eval(MLParams(alpha, beta), z) - ml_eval(MLParams(alpha, beta - alpha), z) \
        + special.rgamma(beta - alpha)
    scale = max(abs(z * ml_eval(MLParams(alpha, beta), z)), 1.0)
    assert abs(lhs) / scale < 1e-10


@settings(max_examples=30, deadline=None)
@given(st.floats(0.3, 1.2), st.floats(0.2, 1.5), st.floats(0.5, 2.0), st.floats(-5, 1))
def test_three_parameter_shift_identity(alpha, extra, gamma, x):
    beta = alpha + extra
    z = complex(x, 0)
    e = lambda b, g: ml3_eval(MLParams(alpha, b, g), z)              # noqa: E731
    lhs = z * e(beta, gamma) - e(beta - alpha, gamma) + e(beta - alpha, gamma - 1)
    scale = max(abs(z * e(beta, gamma)), abs(e(beta - alpha, gamma)), 1e-3)
    assert abs(lhs) / scale < 1e-10


def test_recurrence_matches_series():
    for a, b, z in [(0.5, 1.5, -1), (0.9, 2.3, -4)]:
        assert rel(ml2_via_recurrence(a, b, z), ml3_eval(MLParams(a, b, 2), z)) < 1e-10
    assert ml2_via_recurrence(1, 2, 0) == pytest.approx(1.0)


def test_recurrence_needs_beta_above_one():
    with pytest.raises(DomainError):
        ml2_via_recurrence(0.5, 1.0, -1)


def test_special_functions():
    z = np.linspace(-5, 5, 101)
    assert np.max(np.abs(mittag_leffler(2, 1, z ** 2).real / np.cosh(z) - 1)) < 1e-10
    nz = z[z != 0]
    assert np.max(np.abs(mittag_leffler(2, 2, nz ** 2).real * nz / np.sinh(nz) - 1)) < 1e-10
    split = mittag_leffler(2, 1, -z ** 2) + 1j * z * mittag_leffler(2, 2, -z ** 2)
    assert np.max(np.abs(split - np.exp(1j * z))) < 1e-10


# --- bounds -------------------------------------------------------------------------

def test_sandwich_at_origin():
    b = ml_sandwich_bounds(1, 1, 0)
    assert (b.lower, b.upper) == (1, 1)


def test_sandwich_first_display():
    b = ml_sandwich_bounds(0.5, 1, 2)
    assert b.lower == pytest.approx(1 / (1 + math.gamma(0.5) * 2))
    assert b.upper == pytest.approx(1 / (1 + 2 / math.gamma(1.5)))


def test_sandwich_equal_parameters_uses_tangent_coefficient():
    b = ml_sandwich_bounds(0.5, 0.5, 1)
    c_lo = math.sqrt(math.gamma(0.5) / math.gamma(1.5))
    c_hi = math.gamma(1.5) / math.gamma(2.0)
    assert b.lower == pytest.approx(1 / (1 + c_lo) ** 2)
    assert b.upper == pytest.approx(1 / (1 + c_hi) ** 2)


def test_printed_square_root_coefficient_is_violated_near_zero():
    a, x = 0.5, 1e-3
    printed = 1 / (1 + math.sqrt(math.gamma(1 + a) / math.gamma(1 + 2 * a)) * x) ** 2
    assert sandwich_normaliser(a, a) * ml_eval(MLParams(a, a), -x).real > printed


@pytest.mark.parametrize("alpha", [0.3, 0.5, 0.8, 1.0])
def test_sandwich_holds_on_grid(alpha):
    x = np.logspace(-3, 3, 200)
    for beta in sorted({1.0, alpha, alpha + 0.4, 2.0}):
        v = sandwich_normaliser(alpha, beta) * mittag_leffler(alpha, beta, -x).real
        for xx, vv in zip(x, v):
            b = ml_sandwich_bounds(alpha, beta, float(xx))
            assert b.lower - 1e-10 <= vv <= b.upper + 1e-10


def test_sandwich_unsupported_case():
    with pytest.raises(UnsupportedCaseError):
        ml_sandwich_bounds(0.8, 0.5, 1.0)


def test_podlubny_bound_dominates():
    x = np.logspace(-2, 3, 60)
    for a, b, th in [(1, 1, 0.6 * math.pi), (0.8, 1, 0.6 * math.pi), (0.5, 0.5, 0.4 * math.pi)]:
        vals = np.abs(mittag_leffler(a, b, -x))
        bounds = np.array([ml_podlubny_bound(a, b, -xx, th) for xx in x])
        assert np.all(vals <= bounds)
    assert ml_podlubny_bound(0.8, 1, -5, 0.6 * math.pi) >= abs(ml_eval(MLParams(0.8, 1), -5))
    assert ml_podlubny_bound(0.5, 0.5, -10, 0.4 * math.pi) >= abs(ml_eval(MLParams(0.5, 0.5), -10))


def test_podlubny_sector_preconditions():
    with pytest.raises(PreconditionError):
        podlubny_constant(0.5, 1.0, 0.1)
    with pytest.raises(PreconditionError):
        ml_podlubny_bound(0.5, 1.0, 1.0 + 0j, 0.4 * math.pi)


def test_gamma_poles():
    assert gamma_fn(-0.5) == pytest.approx(-2 * math.sqrt(math.pi))
    with pytest.raises(DomainError):
        gamma_fn(-2.0)
