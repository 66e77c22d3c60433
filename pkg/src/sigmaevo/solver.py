"""Spectral solver for the two Cauchy problems on a periodic box, plus norms.

Each Fourier mode evolves independently, so the solution is assembled from
the time-domain symbols at the requested output times:

    u(t) = N(t)u0 [+ J(t)u1] + int_0^t M(t - tau) f(tau) d tau.

The homogeneous part is exact up to Mittag-Leffler evaluation error. The
retarded integral is ``int (t-tau)^(beta-1) g(t-tau) f(tau) d tau`` with
``g = M / t^(beta-1)`` bounded; ``g f`` is interpolated linearly in time and
the power weight is integrated exactly (product trapezoid rule).
"""

from __future__ import annotations

import csv
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigurationError, DomainError, GridError, LengthError
from .fracops import TimeGrid, caputo_values, product_trapezoid_matrix, rl_integral_values
from .spectral import ModelParams, symbol_J_hat, symbol_M_reduced, symbol_N_hat

SCHEMA_VERSION = 1
THREADS_ENV = "SIGMAEVO_THREADS"


def default_workers() -> int:
    """Worker count from ``SIGMAEVO_THREADS`` (default 1)."""
    raw = os.environ.get(THREADS_ENV, "").strip()
    if not raw:
        return 1
    try:
        val = int(raw)
    except ValueError as exc:
        raise ConfigurationError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from exc
    if val < 1:
        raise ConfigurationError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return val


def _map_columns(fn, xi, workers):
    """Apply ``fn`` to column blocks of the 1-d frequency array ``xi`` and stack along axis -1."""
    workers = workers or default_workers()
    if workers <= 1 or xi.size < 2 * workers:
        return fn(xi)
    parts = np.array_split(xi, workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        out = list(pool.map(fn, parts))
    return np.concatenate(out, axis=-1)


# ---------------------------------------------------------------------------
# Grids and fields
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Grid:
    """Periodic box ``[-L/2, L/2)^n`` with ``N`` points per axis."""

    n: int
    points_per_axis: int
    length: float

    def __post_init__(self):
        if self.n not in (1, 2, 3):
            raise GridError(f"dimension must be 1, 2 or 3, got {self.n}")
        N = self.points_per_axis
        if int(N) != N or N < 2 or (N & (N - 1)):
            raise GridError(f"points_per_axis must be a power of two, got {N}")
        if not self.length > 0:
            raise GridError(f"length must be positive, got {self.length}")

    @property
    def shape(self) -> tuple:
        return (self.points_per_axis,) * self.n

    @property
    def dx(self) -> float:
        return self.length / self.points_per_axis

    @property
    def cell_volume(self) -> float:
        return self.dx ** self.n

    def axis(self) -> np.ndarray:
        return -self.length / 2 + self.dx * np.arange(self.points_per_axis)

    def coords(self) -> tuple:
        return np.meshgrid(*([self.axis()] * self.n), indexing="ij")

    def radius(self) -> np.ndarray:
        return np.sqrt(sum(c ** 2 for c in self.coords()))

    def freq_axis(self) -> np.ndarray:
        """``2 pi k / L`` in FFT order, ``k`` in ``[-N/2, N/2)``."""
        return 2 * np.pi * np.fft.fftfreq(self.points_per_axis, d=self.dx)

    def xi_abs(self) -> np.ndarray:
        ks = np.meshgrid(*([self.freq_axis()] * self.n), indexing="ij")
        return np.sqrt(sum(k ** 2 for k in ks))

    def to_dict(self) -> dict:
        return {"n": self.n, "points_per_axis": self.points_per_axis, "length": self.length}


class SpectralField:
    """Grid samples with their discrete Fourier coefficients, each computed on demand.

    Spectral coefficients use ``numpy.fft.fftn`` of the physical samples (the
    origin-centred box only shifts phases, which cancel in every multiplier).
    ``real`` marks fields whose physical values are real.
    """

    __slots__ = ("grid", "_phys", "_spec", "real")

    def __init__(self, grid: Grid, physical=None, spectral=None, real: bool | None = None):
        if (physical is None) == (spectral is None):
            raise DomainError("give exactly one of physical or spectral data")
        self.grid = grid
        data = physical if physical is not None else spectral
        data = np.asarray(data)
        if data.shape != grid.shape:
            raise LengthError(f"field shape {data.shape} does not match grid {grid.shape}")
        if physical is not None:
            self._phys, self._spec = data.copy(), None
            self.real = not np.iscomplexobj(data) if real is None else real
        else:
            self._phys, self._spec = None, data.astype(complex)
            self.real = bool(real)

    @classmethod
    def from_function(cls, grid: Grid, fn) -> "SpectralField":
        return cls(grid, physical=np.asarray(fn(*grid.coords())))

    @classmethod
    def zeros(cls, grid: Grid) -> "SpectralField":
        return cls(grid, physical=np.zeros(grid.shape))

    @property
    def spectral(self) -> np.ndarray:
        if self._spec is None:
            self._spec = np.fft.fftn(self._phys)
        return self._spec

    @property
    def physical(self) -> np.ndarray:
        if self._phys is None:
            vals = np.fft.ifftn(self._spec)
            self._phys = vals.real if self.real else vals
        return self._phys

    def imag_residual(self) -> float:
        """Largest imaginary part of the inverse transform (0 for non-spectral fields)."""
        if self._spec is None:
            return 0.0
        return float(np.max(np.abs(np.fft.ifftn(self._spec).imag)))

    def with_spectral(self, spec) -> "SpectralField":
        return SpectralField(self.grid, spectral=spec, real=self.real)

    def __add__(self, other: "SpectralField") -> "SpectralField":
        return SpectralField(self.grid, spectral=self.spectral + other.spectral,
                             real=self.real and other.real)

    def __mul__(self, c) -> "SpectralField":
        return SpectralField(self.grid, spectral=self.spectral * c,
                             real=self.real and np.isrealobj(c))

    __rmul__ = __mul__


def frac_laplacian(field: SpectralField, gamma: float) -> SpectralField:
    """``(-Delta)^(gamma/2)``: multiply the spectrum by ``|xi|^gamma``."""
    if not gamma >= 0:
        raise DomainError(f"gamma must be non-negative, got {gamma}")
    if gamma == 0:
        return field.with_spectral(field.spectral.copy())
    return field.with_spectral(field.spectral * field.grid.xi_abs() ** gamma)


def apply_multiplier(field: SpectralField, symbol_fn, workers: int | None = None) -> SpectralField:
    """Multiply the spectrum by ``symbol_fn(|xi|)``, evaluated once per distinct ``|xi|``."""
    xi = field.grid.xi_abs()
    uniq, inv = np.unique(xi, return_inverse=True)
    vals = _map_columns(symbol_fn, uniq, workers)
    return field.with_spectral(field.spectral * vals[inv].reshape(xi.shape))


# ---------------------------------------------------------------------------
# Sources and trajectories
# ---------------------------------------------------------------------------

class Source:
    """Time-dependent right-hand side ``f(t, x)``.

    Build it from a callable ``fn(t) -> array or SpectralField`` or from a
    list of fields sampled on the solver's time grid (starting at ``t = 0``).
    """

    def __init__(self, fn=None, samples=None, verified: bool = False):
        self.fn = fn
        self.samples = samples
        self.verified = verified

    @classmethod
    def zero(cls) -> "Source":
        return cls()

    @property
    def is_zero(self) -> bool:
        return self.fn is None and self.samples is None

    def spectra(self, grid: Grid, times) -> np.ndarray:
        """Stacked spectra at ``times`` (shape ``(len(times),) + grid.shape``)."""
        if self.samples is not None:
            if len(self.samples) != len(times):
                raise LengthError(f"source has {len(self.samples)} samples, need {len(times)}")
            return np.stack([s.spectral for s in self.samples])
        out = []
        for t in times:
            val = self.fn(float(t))
            out.append(val.spectral if isinstance(val, SpectralField)
                       else np.fft.fftn(np.asarray(val)))
        return np.stack(out)


def _as_source(f) -> Source:
    if f is None:
        return Source.zero()
    if isinstance(f, Source):
        return f
    if callable(f):
        return Source(fn=f)
    return Source(samples=list(f))


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: tuple
    params: ModelParams
    problem: str = ""

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        if len(self.states) != times.size:
            raise LengthError("one state per time is required")
        times.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "states", tuple(self.states))

    @property
    def grid(self) -> Grid:
        return self.states[0].grid

    def spectra(self) -> np.ndarray:
        return np.stack([s.spectral for s in self.states])

    def physical(self) -> np.ndarray:
        return np.stack([s.physical for s in self.states])

    def norms(self, q: float) -> np.ndarray:
        return np.array([lq_norm(s, q) for s in self.states])

    def export(self, directory, config: dict | None = None) -> Path:
        """One CSV per time plus ``manifest.json``; returns the manifest path."""
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        axes = ["x", "y", "z"][: self.grid.n]
        coords = [c.ravel() for c in self.grid.coords()]
        files = []
        for i, (t, s) in enumerate(zip(self.times, self.states)):
            name = f"u_{i:05d}.csv"
            vals = np.asarray(s.physical).ravel()
            with (directory / name).open("w", newline="") as fh:
                w = csv.writer(fh)
                w.writerow(axes + ["u"])
                for row in zip(*coords, vals):
                    w.writerow([f"{v:.17g}" for v in row])
            files.append(name)
        manifest = {
            "schema_version": SCHEMA_VERSION,
            "problem": self.problem,
            "params": {k: getattr(self.params, k) for k in ("alpha", "beta", "sigma", "mu", "n")},
            "grid": self.grid.to_dict(),
            "times": [float(t) for t in self.times],
            "files": files,
            "config": config or {},
        }
        path = directory / "manifest.json"
        path.write_text(json.dumps(manifest, indent=2, sort_keys=True))
        return path


# ---------------------------------------------------------------------------
# Solvers
# ---------------------------------------------------------------------------

def _check_times(times):
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise GridError("times must be a non-empty 1-d array")
    if np.any(times < 0) or np.any(np.diff(times) <= 0):
        raise GridError("times must be non-negative and strictly increasing")
    return times


def _source_grid(times):
    """Uniform quadrature grid from 0 through ``times[-1]`` and the output indices on it."""
    if times.size == 1:
        raise GridError("a source term needs at least two output times to fix the step")
    grid = TimeGrid.from_times(times)
    k0 = grid.t0 / grid.dt
    if abs(k0 - round(k0)) > 1e-9 * max(1.0, k0):
        raise GridError("with a source, the first output time must be a multiple of the step")
    k0 = int(round(k0))
    full = grid.dt * np.arange(k0 + grid.n_steps + 1)
    return full, np.arange(k0, k0 + grid.n_steps + 1), grid.dt


def retarded_term(fhat: np.ndarray, dt: float, xi_abs: np.ndarray, p: ModelParams,
                  workers: int | None = None) -> np.ndarray:
    """``int_0^{t_n} M(t_n - tau) f(tau) d tau`` at every node of a uniform grid from 0.

    ``fhat`` has shape ``(n_steps + 1,) + xi_abs.shape``.
    """
    n_steps = fhat.shape[0] - 1
    uniq, inv = np.unique(xi_abs, return_inverse=True)
    lags = dt * np.arange(n_steps + 1)
    g = _map_columns(lambda x: symbol_M_reduced(lags[:, None], x[None, :], p), uniq, workers)
    g = g[:, inv.ravel()]                                    # (lags, modes)
    f2 = fhat.reshape(n_steps + 1, -1)
    w = product_trapezoid_matrix(float(p.beta), n_steps)
    out = np.zeros_like(f2, dtype=complex)
    for n in range(1, n_steps + 1):
        j = np.arange(n + 1)
        out[n] = np.einsum("j,jm,jm->m", w[n, : n + 1], g[n - j], f2[: n + 1])
    out *= dt ** p.beta
    return out.reshape(fhat.shape)


def _solve(problem, u0, u1, f, p: ModelParams, times, workers):
    p.check_problem(problem)
    if u0.grid.n != p.n:
        raise ConfigurationError(f"grid dimension {u0.grid.n} differs from params n={p.n}")
    times = _check_times(times)
    grid = u0.grid
    xi = grid.xi_abs()
    uniq, inv = np.unique(xi, return_inverse=True)
    inv = inv.reshape(xi.shape)

    def table(fn):
        vals = _map_columns(lambda x: fn(times[:, None], x[None, :], p), uniq, workers)
        return vals[:, inv]

    spec = table(symbol_N_hat) * u0.spectral[None]
    real = u0.real
    if u1 is not None:
        spec = spec + table(symbol_J_hat) * u1.spectral[None]
        real = real and u1.real
    src = _as_source(f)
    if not src.is_zero:
        full, idx, dt = _source_grid(times)
        fhat = src.spectra(grid, full)
        spec = spec + retarded_term(fhat, dt, xi, p, workers)[idx]
    states = [SpectralField(grid, spectral=spec[i], real=real) for i in range(times.size)]
    return Trajectory(times, states, p, problem)


def solve_cp1(u0: SpectralField, f, p: ModelParams, times, workers: int | None = None) -> Trajectory:
    """Problem with ``0 < alpha <= 1/2`` (initial displacement only).

    ``f`` may be ``None``, a :class:`Source`, a callable of ``t`` or a list of
    fields on ``times``. Without a source any increasing ``times`` are allowed;
    with one they must be uniform.
    """
    return _solve("cp1", u0, None, f, p, times, workers)


def solve_cp2(u0: SpectralField, u1: SpectralField, f, p: ModelParams, times,
              workers: int | None = None) -> Trajectory:
    """Problem with ``1/2 < alpha <= 1`` (initial displacement and velocity)."""
    if u1.grid != u0.grid:
        raise GridError("u0 and u1 must share a grid")
    return _solve("cp2", u0, u1, f, p, times, workers)


def residual_cp(traj: Trajectory, f=None, min_steps: int = 16) -> float:
    """Discrete residual of the evolution equation along a trajectory.

    Maximum over nodes and modes of
    ``|D^{2a} u + mu |xi|^s D^a u + |xi|^{2s} u - I^{b-2a} f|``, divided by the
    largest magnitude among the initial data and the integrated source. The
    trajectory must start at ``t = 0`` on a uniform grid.
    """
    grid_t = TimeGrid.from_times(traj.times)
    if grid_t.n_steps < min_steps:
        raise GridError(f"residual needs at least {min_steps} steps, got {grid_t.n_steps}")
    if grid_t.t0 != 0:
        raise GridError("residual needs a trajectory starting at t = 0")
    p = traj.params
    dt = grid_t.dt
    u = traj.spectra()
    v = traj.grid.xi_abs() ** p.sigma
    lhs = (caputo_values(u, dt, 2 * p.alpha) + p.mu * v * caputo_values(u, dt, p.alpha)
           + v * v * u)
    src = _as_source(f)
    scale = float(np.max(np.abs(u[0])))
    if not src.is_zero:
        fhat = src.spectra(traj.grid, traj.times)
        rhs = rl_integral_values(fhat, dt, p.beta - 2 * p.alpha)
        lhs = lhs - rhs
        scale = max(scale, float(np.max(np.abs(rhs))))
    if scale == 0:
        return float(np.max(np.abs(lhs)))
    return float(np.max(np.abs(lhs))) / scale


# ---------------------------------------------------------------------------
# Norms
# ---------------------------------------------------------------------------

def lq_norm(field: SpectralField, q: float) -> float:
    """Riemann-sum ``L^q`` norm over one period; ``q = inf`` is the max norm."""
    if not q >= 1:
        raise DomainError(f"q must be >= 1, got {q}")
    vals = np.abs(field.physical)
    if math.isinf(q):
        return float(np.max(vals))
    return float((np.sum(vals ** q) * field.grid.cell_volume) ** (1 / q))


def sobolev_seminorm(field: SpectralField, gamma: float, q: float) -> float:
    """``||(-Delta)^(gamma/2) u||_q``."""
    return lq_norm(frac_laplacian(field, gamma), q)


def mixed_norm(traj: Trajectory, s: float, q: float) -> float:
    """``(int ||u(t)||_q^s dt)^(1/s)`` by the trapezoid rule; ``s = inf`` is the sampled sup."""
    if not s >= 1:
        raise DomainError(f"s must be >= 1, got {s}")
    norms = traj.norms(q)
    if math.isinf(s):
        return float(np.max(norms))
    if traj.times.size < 2:
        raise LengthError("a time integral needs at least two samples")
    return float(np.trapezoid(norms ** s, traj.times) ** (1 / s))


def export_norms(path, times, values, header=("t", "value")) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for t, v in zip(times, values):
            w.writerow([f"{t:.17g}", f"{v:.17g}"])
    return path
