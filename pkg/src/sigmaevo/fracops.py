"""Discrete Caputo derivatives and Riemann-Liouville integrals on uniform grids.

Every operator acts along axis 0 of ``TimeSeries.values``, so a whole bank of
Fourier modes can be differentiated at once. Weight tables are cached per
``(order, n_steps)`` and returned read-only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import special

from .errors import DomainError, GridError, LengthError, PreconditionError


@dataclass(frozen=True)
class TimeGrid:
    dt: float
    n_steps: int
    t0: float = 0.0

    def __post_init__(self):
        if not self.dt > 0:
            raise GridError(f"dt must be positive, got {self.dt}")
        if int(self.n_steps) != self.n_steps or self.n_steps < 1:
            raise GridError(f"n_steps must be a positive integer, got {self.n_steps}")

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.n_steps + 1)

    @classmethod
    def from_times(cls, times, rtol: float = 1e-9) -> "TimeGrid":
        """Recover the grid from sample times, insisting on uniform spacing."""
        times = np.asarray(times, dtype=float)
        if times.ndim != 1 or times.size < 2:
            raise GridError("need at least two sample times")
        steps = np.diff(times)
        dt = (times[-1] - times[0]) / (times.size - 1)
        if np.max(np.abs(steps - dt)) > rtol * max(dt, abs(times[-1])):
            raise GridError("times are not uniformly spaced")
        return cls(dt=float(dt), n_steps=times.size - 1, t0=float(times[0]))


@dataclass(frozen=True)
class TimeSeries:
    grid: TimeGrid
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values)
        if vals.shape[0] != self.grid.n_steps + 1:
            raise LengthError(
                f"expected {self.grid.n_steps + 1} samples, got {vals.shape[0]}")
        object.__setattr__(self, "values", vals)

    @property
    def times(self) -> np.ndarray:
        return self.grid.times

    @classmethod
    def sample(cls, fn, grid: TimeGrid) -> "TimeSeries":
        return cls(grid, np.asarray(fn(grid.times)))


def memory_kernel(nu: float, t: float) -> float:
    """``g_nu(t) = t^(nu-1) / Gamma(nu)``."""
    if not 0 < nu < 1:
        raise PreconditionError(f"nu must lie in (0, 1), got {nu}")
    if not t > 0:
        raise DomainError(f"memory kernel is singular at t={t}")
    return t ** (nu - 1) / math.gamma(nu)


# ---------------------------------------------------------------------------
# Weight tables
# ---------------------------------------------------------------------------

def _power_second_difference(p: float, k: np.ndarray) -> np.ndarray:
    """``(k+1)^p - 2k^p + (k-1)^p`` for integer k >= 1, without cancellation."""
    k = k.astype(float)
    out = np.empty_like(k)
    one = k == 1
    out[one] = 2.0 ** p - 2.0
    kk = k[~one]
    out[~one] = kk ** p * (np.expm1(p * np.log1p(1 / kk)) + np.expm1(p * np.log1p(-1 / kk)))
    return out


@lru_cache(maxsize=64)
def product_trapezoid_matrix(order: float, n_steps: int) -> np.ndarray:
    """Lower-triangular ``W`` with ``(W f)_n ~ int_0^{t_n} (t_n-s)^(order-1) f(s) ds / dt^order``.

    Exact when ``f`` is piecewise linear on the grid. Any ``order > 0`` is
    accepted; :func:`rl_integral` divides by ``Gamma(order)``.
    """
    if not order > 0:
        raise PreconditionError(f"order must be positive, got {order}")
    p = order + 1
    scale = 1.0 / (order * (order + 1))
    n_idx = np.arange(1, n_steps + 1, dtype=float)
    with np.errstate(divide="ignore"):   # n = 1 hits log1p(-1) = -inf, expm1 -> -1
        first = n_idx ** p * (np.expm1(p * np.log1p(-1 / n_idx)) + p / n_idx)
    lag = np.empty(n_steps + 1)
    lag[0] = 1.0
    if n_steps >= 1:
        lag[1:] = _power_second_difference(p, np.arange(1, n_steps + 1))
    w = np.zeros((n_steps + 1, n_steps + 1))
    for n in range(1, n_steps + 1):
        w[n, 1:n + 1] = lag[n - 1::-1][:n]
        w[n, 0] = first[n - 1]
    w *= scale
    w.setflags(write=False)
    return w


@lru_cache(maxsize=64)
def l1_matrix(order: float, n_steps: int) -> np.ndarray:
    """``L`` with ``(L f)_n = sum_j b_{n-j-1} (f_{j+1} - f_j)``, ``b_k = (k+1)^(1-a) - k^(1-a)``."""
    if not 0 < order < 1:
        raise PreconditionError(f"L1 order must lie in (0, 1), got {order}")
    k = np.arange(n_steps, dtype=float)
    b = (k + 1) ** (1 - order) - k ** (1 - order)
    m = np.zeros((n_steps + 1, n_steps + 1))
    for n in range(1, n_steps + 1):
        coef = b[n - 1::-1][:n]           # coefficient of (f_{j+1} - f_j), j = 0..n-1
        m[n, 1:n + 1] += coef
        m[n, 0:n] -= coef
    m.setflags(write=False)
    return m


# ---------------------------------------------------------------------------
# Operators
# ---------------------------------------------------------------------------

def _apply(matrix: np.ndarray, values: np.ndarray) -> np.ndarray:
    flat = values.reshape(values.shape[0], -1)
    return (matrix @ flat).reshape(values.shape)


def rl_integral(series: TimeSeries, gamma: float) -> TimeSeries:
    """Riemann-Liouville integral of order ``gamma`` in [0, 1) (product trapezoid)."""
    if not 0 <= gamma < 1:
        raise PreconditionError(f"gamma must lie in [0, 1), got {gamma}")
    return TimeSeries(series.grid, rl_integral_values(series.values, series.grid.dt, gamma))


def rl_integral_values(values, dt: float, order: float) -> np.ndarray:
    """Array form of :func:`rl_integral`, valid for any ``order >= 0``."""
    values = np.asarray(values)
    if order == 0:
        return values.copy()
    w = product_trapezoid_matrix(float(order), values.shape[0] - 1)
    return _apply(w, values) * (dt ** order / special.gamma(order))


def _first_derivative(values, dt):
    if values.shape[0] < 3:
        raise LengthError("first-derivative stencil needs at least 3 nodes")
    return np.gradient(values, dt, axis=0, edge_order=2)


def _second_derivative(values, dt):
    n = values.shape[0]
    if n < 3:
        raise LengthError("second-difference stencil needs at least 3 nodes")
    out = np.empty_like(values)
    out[1:-1] = values[2:] - 2 * values[1:-1] + values[:-2]
    if n >= 4:
        out[0] = 2 * values[0] - 5 * values[1] + 4 * values[2] - values[3]
        out[-1] = 2 * values[-1] - 5 * values[-2] + 4 * values[-3] - values[-4]
    else:
        out[0] = out[1]
        out[-1] = out[1]
    return out / dt ** 2


def caputo_deriv(series: TimeSeries, gamma: float) -> TimeSeries:
    """Caputo derivative of order ``gamma`` in (0, 2].

    * ``0 < gamma < 1``: L1 scheme (exact for piecewise-linear data).
    * ``gamma = 1``: second-order central differences, one-sided at the ends.
    * ``1 < gamma < 2``: nodal first derivatives (same stencil) fed to the L1
      scheme of order ``gamma - 1``; exact for quadratics.
    * ``gamma = 2``: second differences.
    """
    return TimeSeries(series.grid, caputo_values(series.values, series.grid.dt, gamma))


def caputo_values(values, dt: float, gamma: float) -> np.ndarray:
    values = np.asarray(values)
    n_nodes = values.shape[0]
    if not 0 < gamma <= 2:
        raise PreconditionError(f"gamma must lie in (0, 2], got {gamma}")
    if gamma == 1:
        return _first_derivative(values, dt)
    if gamma == 2:
        return _second_derivative(values, dt)
    if gamma < 1:
        if n_nodes < 2:
            raise LengthError("L1 scheme needs at least 2 nodes")
        m = l1_matrix(float(gamma), n_nodes - 1)
        return _apply(m, values) * (dt ** (-gamma) / special.gamma(2 - gamma))
    if n_nodes < 3:
        raise LengthError("orders in (1, 2) need at least 3 nodes")
    deriv = _first_derivative(values, dt)
    m = l1_matrix(float(gamma - 1), n_nodes - 1)
    return _apply(m, deriv) * (dt ** (1 - gamma) / special.gamma(3 - gamma))


def caputo_order(gamma: float) -> float:
    """Advertised convergence order of :func:`caputo_deriv` on smooth data."""
    if 0 < gamma < 1:
        return 2 - gamma
    if 1 < gamma < 2:
        return 3 - gamma
    if gamma in (1, 2):
        return 2.0
    raise PreconditionError(f"gamma must lie in (0, 2], got {gamma}")
