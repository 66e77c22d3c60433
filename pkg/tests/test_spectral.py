import math
import warnings

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sigmaevo.errors import ConfigurationError, DomainError, InversionError
from sigmaevo.ml import ml3_eval, MLParams
from sigmaevo.spectral import (
    Branch, ModelParams, NearCriticalWarning, SymbolProfile, laplace_partial_fractions_M,
    laplace_symbol_M, laplace_symbol_U0, laplace_symbol_U1, roots, symbol_J_hat,
    symbol_M_hat, symbol_N_hat, talbot_invert,
)


def mp_invert(kind, t, xi, p, dps=30):
    """Independent inverse Laplace transform in extended precision."""
    a, b, mu, v = p.alpha, p.beta, p.mu, xi ** p.sigma
    with mp.workdps(dps):
        def den(s):
            return s ** (2 * a) + mu * v * s ** a + v * v
        F = {
            "N": lambda s: (s ** (2 * a - 1) + mu * v * s ** (a - 1)) / den(s),
            "M": lambda s: s ** (2 * a - b) / den(s),
            "J": lambda s: s ** (2 * a - 2) / den(s),
        }[kind]
        return float(mp.invertlaplace(F, t, method="talbot"))


# --- roots -------------------------------------------------------------------

def test_roots_critical():
    r = roots(2)
    assert r.lambda_plus == r.lambda_minus == 1 and r.branch is Branch.CRITICAL


def test_roots_underdamped():
    r = roots(1)
    assert r.lambda_plus == pytest.approx(0.5 + 1j * math.sqrt(3) / 2, abs=1e-15)
    assert abs(r.lambda_plus) == pytest.approx(1, abs=1e-15)
    assert r.branch is Branch.UNDERDAMPED


def test_roots_overdamped():
    r = roots(4)
    assert r.lambda_plus.real == pytest.approx(2 + math.sqrt(3), rel=1e-15)
    assert r.lambda_minus.real == pytest.approx(2 - math.sqrt(3), rel=1e-14)
    assert abs(r.lambda_plus * r.lambda_minus - 1) < 1e-15


@settings(max_examples=100)
@given(st.floats(1e-3, 50))
def test_root_identities(mu):
    r = roots(mu)
    assert abs(r.lambda_plus * r.lambda_minus - 1) <= 1e-14 * max(1, mu)
    assert abs(r.lambda_plus + r.lambda_minus - mu) <= 1e-14 * max(1, mu)


def test_roots_reject_nonpositive():
    with pytest.raises(DomainError):
        roots(0)


# --- parameters ------------------------------------------------------------------

def test_problem_constraints():
    with pytest.raises(ConfigurationError, match="0 < α ≤ 1/2"):
        ModelParams(0.7, 1.5, 1, 1).check_problem("cp1")
    with pytest.raises(ConfigurationError, match="1/2 < α ≤ 1"):
        ModelParams(0.4, 1.0, 1, 1).check_problem("cp2")
    with pytest.raises(ConfigurationError, match="2α ≤ β"):
        ModelParams(0.4, 0.5, 1, 1).check_problem("cp1")
    ModelParams(0.4, 0.9, 1, 1).check_problem("cp1")
    with pytest.raises(ConfigurationError):
        ModelParams(0.4, 1.0, -1, 1)


# --- Laplace symbols ----------------------------------------------------------------

def test_M_laplace_values():
    p = ModelParams(0.5, 1.0, 1.0, 2.0)
    assert laplace_symbol_M(1.0, 0.0, p) == pytest.approx(1.0)
    s = 2.0
    direct = s ** 0 / (s + 2 * math.sqrt(s) + 1)
    assert laplace_symbol_M(s, 1.0, p) == pytest.approx(direct, rel=1e-15)


def test_M_partial_fractions():
    for mu in (0.5, 3.0):
        p = ModelParams(0.6, 1.3, 1.5, mu)
        s = np.array([1 + 1j, 0.3 - 2j, 4.0])
        assert np.allclose(laplace_partial_fractions_M(s, 1.7, p), laplace_symbol_M(s, 1.7, p),
                           rtol=1e-13, atol=0)
    with pytest.raises(DomainError):
        laplace_partial_fractions_M(1.0, 1.0, ModelParams(0.5, 1, 1, 2))


def test_U0_values_and_identity():
    p = ModelParams(0.5, 1.0, 2.0, 3.0)
    s = np.array([0.5 + 0.1j, 2.0, 3 - 4j])
    assert np.allclose(laplace_symbol_U0(s, 0.0, p), 1 / s, rtol=1e-15)
    assert laplace_symbol_U0(1.0, 1.0, p) == pytest.approx((1 + 3) / (1 + 3 + 1))
    v = 1.3 ** 2
    den = s ** 1.0 + 3 * v * s ** 0.5 + v * v
    assert np.allclose(laplace_symbol_U0(s, 1.3, p), 1 / s - v * v / s / den, rtol=1e-13)


def test_U1_values():
    p = ModelParams(0.7, 1.5, 1.0, 2.0)
    s = np.array([1 + 1j, 3.0])
    assert np.allclose(laplace_symbol_U1(s, 0.0, p), s ** -2.0, rtol=1e-14)
    assert laplace_symbol_U1(3.0, 1.0, p) == pytest.approx(3 ** (1.4 - 2) / (3 ** 0.7 + 1) ** 2,
                                                           rel=1e-14)
    s = 1 + 1j
    q = ModelParams(0.7, 1.5, 1.0, 0.8)
    den = s ** 1.4 + 0.8 * 2 * s ** 0.7 + 4
    assert abs(laplace_symbol_U1(s, 2.0, q) * den - s ** (-0.6)) < 1e-13


# --- time-domain symbols ---------------------------------------------------------------

PARAMS = [ModelParams(0.5, 1.0, 2.0, 3.0), ModelParams(0.4, 0.9, 1.0, 1.0),
          ModelParams(0.8, 1.8, 2.0, 0.5), ModelParams(0.75, 2.0, 1.0, 2.0)]


@pytest.mark.parametrize("p", PARAMS)
def test_trivial_limits(p):
    t = np.array([0.1, 1.0, 7.0])
    assert np.allclose(symbol_N_hat(0.0, np.array([0.5, 3.0]), p), 1.0, atol=1e-14)
    assert np.allclose(symbol_N_hat(t, 0.0, p), 1.0)
    assert np.allclose(symbol_M_hat(t, 0.0, p), t ** (p.beta - 1) / math.gamma(p.beta))
    assert np.allclose(symbol_J_hat(t, 0.0, p), t)
    assert np.all(symbol_J_hat(0.0, np.array([0.5, 2.0]), p) == 0)


def test_M_requires_positive_time():
    with pytest.raises(DomainError):
        symbol_M_hat(0.0, 1.0, PARAMS[0])


def test_critical_M_matches_three_parameter_function():
    p = ModelParams(0.6, 1.4, 1.5, 2.0)
    for t, xi in [(0.5, 1.0), (2.0, 0.7), (1.3, 2.0)]:
        x = xi ** p.sigma * t ** p.alpha
        ref = t ** (p.beta - 1) * ml3_eval(MLParams(p.alpha, p.beta, 2.0), -x).real
        assert symbol_M_hat(t, xi, p) == pytest.approx(ref, rel=1e-10)


@pytest.mark.parametrize("kind,t,xi,p", [
    ("N", 1.0, 1.0, ModelParams(0.5, 1.0, 2.0, 3.0)),
    ("M", 0.7, 2.0, ModelParams(0.4, 0.9, 1.0, 1.0)),
    ("J", 1.0, 1.0, ModelParams(0.8, 1.8, 2.0, 0.5)),
    ("N", 2.0, 0.8, ModelParams(0.75, 2.0, 1.0, 2.0)),
    ("M", 0.4, 1.2, ModelParams(1.0, 2.5, 1.0, 4.0)),
])
def test_symbols_against_extended_precision_inversion(kind, t, xi, p):
    fn = {"N": symbol_N_hat, "M": symbol_M_hat, "J": symbol_J_hat}[kind]
    ref = mp_invert(kind, t, xi, p)
    assert abs(float(fn(t, xi, p)) - ref) <= 1e-6 * abs(ref)


def test_underdamped_sum_is_real():
    p = ModelParams(0.6, 1.5, 1.0, 0.7)
    for fn in (symbol_N_hat, symbol_J_hat):
        raw = fn(np.array([0.5, 2.0]), 1.0, p, real=False)
        assert np.max(np.abs(raw.imag)) < 1e-12 * np.max(np.abs(raw))


def test_near_critical_warns_and_is_continuous():
    c = symbol_N_hat(1.0, 1.0, ModelParams(0.5, 1, 2, 2.0))
    with pytest.warns(NearCriticalWarning):
        v = symbol_N_hat(1.0, 1.0, ModelParams(0.5, 1, 2, 2 + 1e-10))
    assert v == pytest.approx(c, abs=1e-9)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        for mu in (2 - 1e-6, 2 + 1e-6):
            assert abs(symbol_N_hat(1.0, 1.0, ModelParams(0.5, 1, 2, mu)) - c) < 1e-4


def test_symbol_profile_table():
    p = PARAMS[0]
    prof = SymbolProfile.tabulate("J", [0.5, 1.0], [0.0, 1.0, 2.0], p)
    assert prof.values.shape == (2, 3) and not prof.values.flags.writeable
    with pytest.raises(DomainError):
        SymbolProfile.tabulate("Q", [1.0], [1.0], p)


# --- Talbot ------------------------------------------------------------------------------

def test_talbot_textbook_pairs():
    assert talbot_invert(lambda s: 1 / s, 2.0) == pytest.approx(1.0, abs=1e-10)
    for a in (-1.0, 0.5):
        assert talbot_invert(lambda s: 1 / (s - a), 1.5).real == pytest.approx(
            math.exp(a * 1.5), rel=1e-9)
    v = talbot_invert(lambda s: 1 / (s - 0.5), 1.5, method="fixed").real
    assert v == pytest.approx(math.exp(0.75), rel=1e-7)


def test_talbot_three_parameter_pair():
    a, b, g, lam, t = 0.6, 1.3, 1.7, -0.8, 2.5
    v = talbot_invert(lambda s: s ** (a * g - b) / (s ** a - lam) ** g, t).real
    ref = t ** (b - 1) * ml3_eval(MLParams(a, b, g), lam * t ** a).real
    assert v == pytest.approx(ref, rel=1e-8)


def test_talbot_errors():
    with pytest.raises(DomainError):
        talbot_invert(lambda s: 1 / s, 0.0)
    with pytest.raises(DomainError):
        talbot_invert(lambda s: 1 / s, 1.0, method="euler")
    with pytest.raises(InversionError):
        talbot_invert(lambda s: np.exp(s * s), 1.0)
