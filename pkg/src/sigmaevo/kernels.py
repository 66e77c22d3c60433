"""Bessel functions, a panel-quadrature Hankel transform and radial kernels.

The transform computed here is

    H_nu[phi](tau) = int_0^inf phi(rho) (tau rho)^(-nu) J_nu(tau rho) rho^(2 nu + 1) d rho,

so that for ``nu = n/2 - 1`` the inverse Fourier transform in R^n of a radial
multiplier ``phi(|xi|)`` is ``(2 pi)^(-n/2) H_nu[phi](|x|)``.

Quadrature: Gauss-Legendre panels on ``(0, r_max)``, graded geometrically
towards the origin and no wider than the Bessel-zero spacing at the largest
requested ``tau``. Past ``r_max`` the tail is summed panel by panel between
consecutive zeros of ``J_nu(tau rho)`` (geometric panels when ``tau = 0``)
and the partial sums are accelerated with Wynn's epsilon algorithm. The tail
error estimate is always recorded in the profile metadata; a tail that fails
to settle triggers :class:`TruncationWarning` as well.
"""

from __future__ import annotations

import csv
import json
import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np
from scipy import optimize, special

from .errors import DomainError, GridError, RegimeError
from .ml import mittag_leffler
from .spectral import ModelParams, symbol_J_hat, symbol_M_hat, symbol_N_hat

SCHEMA_VERSION = 1


class TruncationWarning(UserWarning):
    """The Hankel tail estimate did not reach the requested tolerance."""


@dataclass(frozen=True)
class RadialProfile:
    """Samples of a radial function on strictly increasing positive radii.

    ``values`` is real for real data; complex damping constants give a
    complex profile.
    """

    radii: np.ndarray
    values: np.ndarray
    dim: int
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        radii = np.asarray(self.radii, dtype=float)
        values = np.asarray(self.values)
        if radii.ndim != 1 or radii.size == 0:
            raise GridError("radii must be a non-empty 1-d array")
        if radii[0] <= 0:
            raise GridError("radii must be positive; kernels are never reported at r = 0")
        if np.any(np.diff(radii) <= 0):
            raise GridError("radii must be strictly increasing")
        if values.shape != radii.shape:
            raise GridError(f"values shape {values.shape} does not match radii {radii.shape}")
        radii.setflags(write=False)
        values = values.copy()
        values.setflags(write=False)
        object.__setattr__(self, "radii", radii)
        object.__setattr__(self, "values", values)

    def radial_integral(self, power: float = 1.0) -> float:
        """Trapezoid value of ``int |v|^power dx`` over R^dim on the sampled radii."""
        weight = _sphere_measure(self.dim) * self.radii ** (self.dim - 1)
        return float(np.trapezoid(np.abs(self.values) ** power * weight, self.radii))

    def mass(self) -> float:
        """Trapezoid value of ``int v dx`` (real part) over R^dim."""
        weight = _sphere_measure(self.dim) * self.radii ** (self.dim - 1)
        return float(np.trapezoid(np.real(self.values) * weight, self.radii))

    def lr_norm(self, r: float) -> float:
        if math.isinf(r):
            return float(np.max(np.abs(self.values)))
        return self.radial_integral(r) ** (1.0 / r)

    def to_csv(self, path) -> Path:
        """Write ``r,value`` rows (plus ``value_imag`` for complex data) and a ``.json`` sidecar."""
        path = Path(path)
        cplx = np.iscomplexobj(self.values)
        with path.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["r", "value", "value_imag"] if cplx else ["r", "value"])
            for r, v in zip(self.radii, self.values):
                row = [f"{r:.17g}", f"{np.real(v):.17g}"]
                if cplx:
                    row.append(f"{np.imag(v):.17g}")
                w.writerow(row)
        side = path.with_suffix(".json")
        side.write_text(json.dumps({"schema_version": SCHEMA_VERSION, "dim": self.dim,
                                    "meta": _jsonable(self.meta)}, indent=2, sort_keys=True))
        return path

    @classmethod
    def from_csv(cls, path) -> "RadialProfile":
        path = Path(path)
        data = np.genfromtxt(path, delimiter=",", names=True)
        vals = data["value"]
        if "value_imag" in data.dtype.names:
            vals = vals + 1j * data["value_imag"]
        side = json.loads(path.with_suffix(".json").read_text())
        return cls(np.atleast_1d(data["r"]), np.atleast_1d(vals), side["dim"], side["meta"])


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    return obj


def _sphere_measure(n: int) -> float:
    return 2 * math.pi ** (n / 2) / math.gamma(n / 2)


# ---------------------------------------------------------------------------
# Bessel helpers
# ---------------------------------------------------------------------------

def bessel_j(nu: float, x):
    """``J_nu(x)`` for ``nu > -1`` and ``x >= 0``."""
    if not nu > -1:
        raise DomainError(f"Bessel order must exceed -1, got {nu}")
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise DomainError("Bessel argument must be non-negative")
    if nu == 0.5:
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(x > 0, np.sqrt(2 / (np.pi * np.where(x > 0, x, 1))) * np.sin(x), 0.0)
    elif nu == -0.5:
        with np.errstate(divide="ignore"):
            out = np.sqrt(2 / (np.pi * x)) * np.cos(x)
    else:
        out = special.jv(nu, x)
    return out[()] if out.ndim == 0 else out


def bessel_ratio(nu: float, z):
    """``z^(-nu) J_nu(z)``, an entire function of ``z`` (finite at 0)."""
    z = np.asarray(z, dtype=float)
    if nu == -0.5:
        return math.sqrt(2 / math.pi) * np.cos(z)
    if nu == 0.5:
        return math.sqrt(2 / math.pi) * np.sinc(z / math.pi)
    out = np.empty_like(z)
    small = z < 1e-3
    if np.any(small):
        q = -(z[small] ** 2) / 4
        # three terms of the power series; the next one is below 1e-24
        out[small] = (1 / math.gamma(nu + 1) + q / math.gamma(nu + 2)
                      + q * q / (2 * math.gamma(nu + 3))) / 2 ** nu
    big = ~small
    out[big] = special.jv(nu, z[big]) * z[big] ** (-nu)
    return out


@lru_cache(maxsize=32)
def _zero_table(nu: float, count: int) -> tuple:
    step = 0.25
    x = np.arange(step, (count + abs(nu) + 2) * math.pi + step, step)
    f = special.jv(nu, x)
    idx = np.nonzero(np.sign(f[:-1]) * np.sign(f[1:]) < 0)[0]
    zeros = [optimize.brentq(lambda s: special.jv(nu, s), x[i], x[i + 1], xtol=1e-15)
             for i in idx[:count]]
    return tuple(zeros)


def bessel_zeros(nu: float, count: int) -> np.ndarray:
    """First ``count`` positive zeros of ``J_nu`` (cached, read-only)."""
    if not nu > -1:
        raise DomainError(f"Bessel order must exceed -1, got {nu}")
    size = 64
    while size < count:
        size *= 2
    out = np.array(_zero_table(float(nu), size)[:count])
    out.setflags(write=False)
    return out


# ---------------------------------------------------------------------------
# Hankel transform
# ---------------------------------------------------------------------------

def _wynn(partial):
    """Wynn epsilon extrapolation of a sequence of partial sums -> (limit, error estimate)."""
    s = [complex(v) for v in partial]
    if len(s) < 3:
        return s[-1], (abs(s[-1] - s[-2]) if len(s) > 1 else math.inf)
    prev = [0j] * (len(s) + 1)
    cur = list(s)
    estimates = [s[-1]]
    k = 0
    while len(cur) > 1:
        nxt = []
        for i in range(len(cur) - 1):
            d = cur[i + 1] - cur[i]
            if d == 0:
                nxt.append(complex(math.inf))
            else:
                nxt.append(prev[i + 1] + 1 / d)
        prev, cur = cur, nxt
        k += 1
        if k % 2 == 0 and all(map(np.isfinite, cur)):
            estimates.append(cur[-1])
    if len(estimates) < 2:
        return s[-1], abs(s[-1] - s[-2])
    return estimates[-1], abs(estimates[-1] - estimates[-2])


def _gauss_panels(breaks, n_nodes):
    x, w = np.polynomial.legendre.leggauss(n_nodes)
    a, b = breaks[:-1, None], breaks[1:, None]
    half = (b - a) / 2
    return (a + half * (x + 1)).ravel(), (half * w).ravel()


@dataclass(frozen=True)
class HankelOptions:
    r_max: float = 40.0
    n_nodes: int = 24
    radial_panels: int = 128
    tail_panels: int = 24
    tol: float = 1e-12


def _hankel_values(profile, nu, taus, opts: HankelOptions):
    taus = np.asarray(taus, dtype=float)
    r_max = float(opts.r_max)
    tau_top = float(np.max(taus)) if taus.size else 0.0
    width = r_max / opts.radial_panels
    if tau_top > 0:
        width = min(width, math.pi / tau_top)
    n_lin = int(math.ceil(r_max / width))
    grading = r_max / opts.radial_panels * 2.0 ** -np.arange(1, 40)
    breaks = np.unique(np.concatenate([[0.0], grading, np.linspace(0, r_max, n_lin + 1)]))
    rho, w = _gauss_panels(breaks, opts.n_nodes)
    phi = np.asarray(profile(rho))
    base = phi * w * rho ** (2 * nu + 1)
    head = np.empty(taus.shape, dtype=base.dtype)
    block = max(1, 4_000_000 // max(rho.size, 1))
    for i in range(0, taus.size, block):
        tb = taus[i:i + block]
        head[i:i + block] = bessel_ratio(nu, tb[:, None] * rho[None, :]) @ base
    peak = np.max(np.abs(head)) if head.size else 0.0

    edge = np.abs(np.asarray(profile(np.array([r_max]))))[0] * r_max ** (2 * nu + 2)
    tails = np.zeros(taus.shape, dtype=complex)
    errors = np.zeros(taus.shape)
    if edge > 1e-17 * max(peak, np.max(np.abs(base)) if base.size else 0.0, 1e-300):
        for i, tau in enumerate(taus):
            tails[i], errors[i] = _hankel_tail(profile, nu, tau, r_max, opts)
    out = head + tails
    if not np.iscomplexobj(phi):
        out = out.real
    return out, errors


def _hankel_tail(profile, nu, tau, r_max, opts):
    if tau > 0:
        z = tau * r_max
        count = int(z / math.pi + abs(nu) + opts.tail_panels + 4)
        zeros = bessel_zeros(nu, count) / tau
        beyond = zeros[zeros > r_max][: opts.tail_panels + 1]
        breaks = np.concatenate([[r_max], beyond])
    else:
        breaks = r_max * 2.0 ** np.arange(0, opts.tail_panels + 1)
    rho, w = _gauss_panels(breaks, opts.n_nodes)
    vals = np.asarray(profile(rho)) * w * rho ** (2 * nu + 1) * bessel_ratio(nu, tau * rho)
    panel = vals.reshape(len(breaks) - 1, opts.n_nodes).sum(axis=1)
    partial = np.cumsum(panel)
    limit, err = _wynn(partial[-24:])
    return limit, err


def hankel_transform(profile, nu: float, taus, r_max: float = 40.0, n_nodes: int = 24,
                     dim: int | None = None, meta: dict | None = None,
                     options: HankelOptions | None = None) -> RadialProfile:
    """Evaluate ``H_nu[profile]`` at the positive, increasing points ``taus``.

    ``profile`` maps an array of radii to values. The estimated tail error is
    stored as ``meta["truncation_error"]``.
    """
    if not nu > -1:
        raise DomainError(f"Hankel order must exceed -1, got {nu}")
    opts = options or HankelOptions(r_max=r_max, n_nodes=n_nodes)
    taus = np.asarray(taus, dtype=float)
    values, errors = _hankel_values(profile, nu, taus, opts)
    err = float(np.max(errors)) if errors.size else 0.0
    scale = float(np.max(np.abs(values))) if values.size else 0.0
    ok = err <= max(opts.tol * scale, 1e-300) or err == 0.0
    if not ok:
        warnings.warn(f"Hankel tail estimate {err:.3g} exceeds tolerance", TruncationWarning,
                      stacklevel=2)
    info = dict(meta or {})
    info.update(nu=nu, r_max=opts.r_max, n_nodes=opts.n_nodes,
                truncation_error=err, tail_converged=bool(ok))
    return RadialProfile(taus, values, dim if dim is not None else int(round(2 * nu + 2)), info)


# ---------------------------------------------------------------------------
# Kernels
# ---------------------------------------------------------------------------

def _ml_decay_power(alpha: float, beta: float) -> float:
    """First ``k >= 1`` with ``1/Gamma(beta - alpha k) != 0``: ``E_{a,b}(-x) ~ x^-k``.

    Returns ``inf`` when every coefficient vanishes (``alpha = 1``, ``beta = 1``).
    """
    for k in range(1, 64):
        arg = beta - alpha * k
        if not (arg <= 0 and abs(arg - round(arg)) < 1e-12):
            return float(k)
    return math.inf


def kernel_regime(n: int, sigma: float, eta: float, alpha: float, beta: float) -> str:
    """Integrability label of ``rho^eta E_{alpha,beta}(-rho^sigma)`` in ``L^r(rho^(n-1))``, ``1 <= r <= 2``.

    ``"(i)"``: absolutely integrable (``r = 1``); ``"(ii)"``: some ``1 < r <= 2``
    with ``eta = 0``; ``"(iii)"``: some ``1 < r <= 2`` with ``eta != 0``. The
    conditions are ``r eta + n > 0`` at the origin and
    ``r (k sigma - eta) > n`` at infinity, where ``x^-k`` is the leading decay.
    """
    d = _ml_decay_power(alpha, beta) * sigma - eta
    if eta + n > 0 and d > n:
        return "(i)"
    lo = max(1.0, n / d) if d > 0 else math.inf
    hi = min(2.0, n / -eta) if eta < 0 else 2.0
    if lo < hi or (lo == 1.0 and hi > 1.0 and d > n):
        return "(ii)" if eta == 0 else "(iii)"
    raise RegimeError(
        "kernel parameters are outside every integrability regime: need 1 <= r <= 2 with "
        f"r*eta + n > 0 (eta={eta:g}, n={n}) and r*(k*sigma - eta) > n "
        f"(k*sigma - eta = {d:g}); no such r exists")


def _radii(radii):
    radii = np.asarray(radii, dtype=float)
    if radii.ndim != 1 or radii.size == 0 or radii[0] <= 0 or np.any(np.diff(radii) <= 0):
        raise GridError("radii must be positive and strictly increasing")
    return radii


def kernel_K(t: float, radii, eta: float, alpha: float, beta: float, sigma: float,
             lam: complex, n: int = 1, options: HankelOptions | None = None) -> RadialProfile:
    """Inverse Fourier transform of ``|xi|^eta E_{alpha,beta}(-lam |xi|^sigma t^alpha)`` in R^n."""
    if not t > 0:
        raise DomainError(f"t must be positive, got {t}")
    radii = _radii(radii)
    regime = kernel_regime(n, sigma, eta, alpha, beta)
    lam = complex(lam)
    real = lam.imag == 0

    def phi(rho):
        z = -lam * rho ** sigma * t ** alpha
        val = rho ** eta * mittag_leffler(alpha, beta, z if not real else z.real)
        return np.real(val) if real else val

    nu = n / 2 - 1
    prof = hankel_transform(phi, nu, radii, dim=n, options=options or _kernel_options(sigma, t, alpha),
                            meta=dict(kernel="K", t=t, eta=eta, alpha=alpha, beta=beta,
                                      sigma=sigma, lam=lam, n=n, regime=regime))
    return RadialProfile(prof.radii, prof.values / (2 * math.pi) ** (n / 2), n, prof.meta)


def _kernel_options(sigma, t, alpha):
    # frequency scale of the multiplier: |xi|^sigma t^alpha ~ 1
    scale = t ** (-alpha / sigma)
    return HankelOptions(r_max=max(40.0 * scale, 1.0), n_nodes=24)


_SYMBOL_DECAY = {"N": 1, "M": 2, "J": 2}


def _symbol_kernel(kind, t, radii, p: ModelParams, options):
    radii = _radii(radii)
    if kind == "J" and t == 0:
        return RadialProfile(radii, np.zeros_like(radii), p.n,
                             dict(kernel="J", t=0.0, alpha=p.alpha, beta=p.beta,
                                  sigma=p.sigma, mu=p.mu, n=p.n))
    if not t > 0:
        raise DomainError(f"t must be positive, got {t}")
    decay = _SYMBOL_DECAY[kind] * p.sigma
    if not decay > p.n / 2:
        raise RegimeError(
            f"symbol {kind} decays like |xi|^-{decay:g}, which is not in L^r for any r <= 2 "
            f"when n={p.n}; need {_SYMBOL_DECAY[kind]}*sigma > n/2")
    fn = {"N": symbol_N_hat, "M": symbol_M_hat, "J": symbol_J_hat}[kind]
    nu = p.n / 2 - 1
    prof = hankel_transform(lambda rho: fn(t, rho, p), nu, radii, dim=p.n,
                            options=options or _kernel_options(p.sigma, t, p.alpha),
                            meta=dict(kernel=kind, t=t, alpha=p.alpha, beta=p.beta,
                                      sigma=p.sigma, mu=p.mu, n=p.n))
    return RadialProfile(prof.radii, prof.values / (2 * math.pi) ** (p.n / 2), p.n, prof.meta)


def kernel_N(t: float, radii, p: ModelParams, options: HankelOptions | None = None) -> RadialProfile:
    return _symbol_kernel("N", t, radii, p, options)


def kernel_M(t: float, radii, p: ModelParams, options: HankelOptions | None = None) -> RadialProfile:
    return _symbol_kernel("M", t, radii, p, options)


def kernel_J(t: float, radii, p: ModelParams, options: HankelOptions | None = None) -> RadialProfile:
    return _symbol_kernel("J", t, radii, p, options)
