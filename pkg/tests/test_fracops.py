import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sigmaevo.errors import DomainError, GridError, LengthError, PreconditionError
from sigmaevo.fracops import (
    TimeGrid, TimeSeries, caputo_deriv, caputo_order, l1_matrix, memory_kernel,
    product_trapezoid_matrix, rl_integral, rl_integral_values,
)
from sigmaevo.ml import mittag_leffler


def rl_oracle(p, gamma, t):
    """I^gamma t^p evaluated by quadrature of the defining convolution."""
    with mp.workdps(30):
        # u = (t - s)^gamma removes the endpoint singularity
        f = lambda u: (t - u ** (1 / mp.mpf(gamma))) ** p          # noqa: E731
        return float(mp.quad(f, [0, mp.mpf(t) ** gamma]) / (gamma * mp.gamma(gamma)))


def caputo_oracle(p, gamma, t):
    """Caputo derivative of t^p via quadrature of its definition."""
    m = math.floor(gamma) + 1
    nu = m - gamma
    with mp.workdps(30):
        coeff = mp.gamma(p + 1) / mp.gamma(p + 1 - m)
        f = lambda u: coeff * (t - u ** (1 / mp.mpf(nu))) ** (p - m)       # noqa: E731
        return float(mp.quad(f, [0, mp.mpf(t) ** nu]) / (nu * mp.gamma(nu)))


def series(fn, dt=0.01, n=200):
    return TimeSeries.sample(fn, TimeGrid(dt, n))


# --- memory kernel ---------------------------------------------------------

def test_memory_kernel_values():
    assert memory_kernel(0.5, 1) == pytest.approx(0.5641895835477563, rel=1e-14)
    assert memory_kernel(1 - 1e-12, 2) == pytest.approx(1.0, abs=1e-10)
    ref = float(mp.mpf(0.5) ** mp.mpf(-0.75) / mp.gamma(0.25))
    assert memory_kernel(0.25, 0.5) == pytest.approx(ref, rel=1e-14)


def test_memory_kernel_errors():
    with pytest.raises(DomainError):
        memory_kernel(0.5, 0.0)
    with pytest.raises(PreconditionError):
        memory_kernel(1.0, 1.0)


def test_memory_kernel_is_probability_density_over_unit_mass():
    # int_0^1 g_nu = 1/Gamma(nu+1)
    with mp.workdps(20):
        val = mp.quad(lambda t: memory_kernel(0.4, float(t)), [0, 1])
    assert float(val) == pytest.approx(1 / math.gamma(1.4), rel=1e-8)


# --- grids -----------------------------------------------------------------

def test_grid_validation():
    with pytest.raises(GridError):
        TimeGrid(0.0, 5)
    with pytest.raises(GridError):
        TimeGrid(0.1, 0)
    with pytest.raises(GridError):
        TimeGrid.from_times([0, 0.1, 0.3])
    g = TimeGrid.from_times(np.linspace(0, 2, 21))
    assert g.n_steps == 20 and g.dt == pytest.approx(0.1)


def test_series_length_checked():
    with pytest.raises(LengthError):
        TimeSeries(TimeGrid(0.1, 4), np.zeros(4))


def test_weight_tables_are_read_only_and_cached():
    w = product_trapezoid_matrix(0.3, 10)
    assert w is product_trapezoid_matrix(0.3, 10)
    with pytest.raises(ValueError):
        w[1, 1] = 0
    assert not l1_matrix(0.5, 10).flags.writeable


# --- Riemann-Liouville integral -----------------------------------------------

def test_rl_of_zero_and_identity_order():
    s = series(lambda t: 0 * t)
    assert np.all(rl_integral(s, 0.5).values == 0)
    s = series(np.sin)
    assert np.array_equal(rl_integral(s, 0).values, s.values)


@pytest.mark.parametrize("p,gamma", [(0, 0.5), (1, 0.3)])
def test_rl_exact_for_linear(p, gamma):
    s = series(lambda t: t ** p, dt=0.05, n=40)
    got = rl_integral(s, gamma).values[1:]
    t = s.times[1:]
    exact = math.gamma(p + 1) / math.gamma(p + 1 + gamma) * t ** (p + gamma)
    assert np.max(np.abs(got - exact)) < 1e-12
    assert got[-1] == pytest.approx(rl_oracle(p, gamma, t[-1]), rel=1e-12)


def test_rl_precondition():
    with pytest.raises(PreconditionError):
        rl_integral(series(np.sin), 1.0)


def test_rl_semigroup():
    f = lambda t: np.sin(t) * t               # noqa: E731
    errs = []
    for n in (100, 200):
        s = series(f, dt=1.0 / n, n=n)
        two = rl_integral(rl_integral(s, 0.3), 0.4).values
        one_step = rl_integral_values(s.values, s.grid.dt, 0.7)
        errs.append(np.max(np.abs(two - one_step)))
    assert errs[1] < errs[0] and errs[1] < 1e-4


# --- Caputo derivative ------------------------------------------------------------

def test_caputo_constant_is_zero():
    s = series(lambda t: 3 + 0 * t)
    assert np.max(np.abs(caputo_deriv(s, 0.5).values)) < 1e-12


def test_caputo_linear_exact():
    s = series(lambda t: t, dt=0.05, n=40)
    got = caputo_deriv(s, 0.5).values
    t = s.times
    assert np.max(np.abs(got - t ** 0.5 / math.gamma(1.5))) < 1e-12
    assert got[-1] == pytest.approx(caputo_oracle(1, 0.5, t[-1]), rel=1e-12)


def test_caputo_quadratic_second_branch():
    s = series(lambda t: t ** 2, dt=0.05, n=40)
    got = caputo_deriv(s, 1.5).values
    t = s.times
    exact = math.gamma(3) / math.gamma(1.5) * t ** 0.5
    assert np.max(np.abs(got - exact)) < 1e-11
    assert got[-1] == pytest.approx(caputo_oracle(2, 1.5, t[-1]), rel=1e-11)


def test_integer_orders():
    s = series(np.sin, dt=1e-3, n=1000)
    assert np.max(np.abs(caputo_deriv(s, 1).values - np.cos(s.times))) < 1e-5
    assert np.max(np.abs(caputo_deriv(s, 2).values + np.sin(s.times))) < 1e-4


def test_caputo_errors():
    with pytest.raises(PreconditionError):
        caputo_deriv(series(np.sin), 2.5)
    with pytest.raises(LengthError):
        caputo_deriv(TimeSeries(TimeGrid(0.1, 1), np.zeros(2)), 1.5)


@pytest.mark.parametrize("gamma", [0.3, 0.5, 0.8, 1.4, 1.7])
def test_convergence_order_on_cubic(gamma):
    errs = []
    for n in (64, 128, 256):
        s = series(lambda t: t ** 3, dt=1.0 / n, n=n)
        got = caputo_deriv(s, gamma).values[-1]
        exact = math.gamma(4) / math.gamma(4 - gamma)
        errs.append(abs(got - exact))
    order = math.log2(errs[-2] / errs[-1])
    assert order >= caputo_order(gamma) - 0.25


def test_left_inverse():
    f = lambda t: t * np.exp(-t)          # f(0) = 0
    errs = []
    for n in (100, 400):
        s = series(f, dt=2.0 / n, n=n)
        back = caputo_deriv(rl_integral(s, 0.4), 0.4).values
        errs.append(np.max(np.abs(back - s.values)))
    assert errs[1] < errs[0] / 2 and errs[1] < 1e-2


def test_laplace_consistency_with_ml():
    # I^{gamma}[t^{b-1} E_{a,b}(lam t^a)] = t^{b+gamma-1} E_{a,b+gamma}(lam t^a)
    a, b, g, lam = 0.6, 1.0, 0.5, -1.0
    errs = []
    for n in (100, 400):
        grid = TimeGrid(1.0 / n, n)
        t = grid.times
        f = t ** (b - 1) * mittag_leffler(a, b, lam * t ** a).real
        got = rl_integral(TimeSeries(grid, f), g).values[1:]
        tt = t[1:]
        exact = tt ** (b + g - 1) * mittag_leffler(a, b + g, lam * tt ** a).real
        errs.append(np.max(np.abs(got - exact)))
    assert errs[1] < errs[0] and errs[1] < 1e-3


@settings(max_examples=25, deadline=None)
@given(st.floats(0.05, 0.95), st.floats(-2, 2), st.floats(-2, 2))
def test_caputo_linearity(gamma, a, b):
    s1, s2 = series(np.sin, n=50), series(np.cos, n=50)
    lhs = caputo_deriv(TimeSeries(s1.grid, a * s1.values + b * s2.values), gamma).values
    rhs = a * caputo_deriv(s1, gamma).values + b * caputo_deriv(s2, gamma).values
    assert np.max(np.abs(lhs - rhs)) < 1e-10


def test_vectorised_columns():
    g = TimeGrid(0.01, 100)
    t = g.times
    bank = np.stack([t, t ** 2, np.sin(t)], axis=1)
    out = caputo_deriv(TimeSeries(g, bank), 0.6).values
    for j in range(3):
        assert np.allclose(out[:, j], caputo_deriv(TimeSeries(g, bank[:, j]), 0.6).values)
