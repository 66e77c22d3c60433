"""Verification suites: each returns a list of :class:`EstimateReport`.

Suites are independent. :func:`run_suites` executes them in a thread pool and
returns the reports sorted by claim id, so the output is deterministic.
"""

from __future__ import annotations

import math
from fractions import Fraction
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from .errors import ConfigurationError
from .estimates import (
    EstimateReport, ExponentClaim, Setting, check_assumptions, fit_decay_exponent,
    in_region_R12, in_region_R3, in_region_S, lambda_closed, lambda_quadrature, lemma_condition,
    lhs_C, lhs_D, mellin_lhs, mellin_rhs, rhs_C, rhs_D, strichartz_s_bound, strichartz_theta,
)
from .ml import mittag_leffler, ml_sandwich_bounds, sandwich_normaliser
from .solver import (
    Grid, SpectralField, apply_multiplier, default_workers, lq_norm, residual_cp, solve_cp1,
    solve_cp2,
)
from .spectral import (
    SYMBOLS, ModelParams, laplace_symbol_M, laplace_symbol_U0, laplace_symbol_U1, roots,
    talbot_invert,
)


# ---------------------------------------------------------------------------
# Configurations
# ---------------------------------------------------------------------------

@dataclass
class DecayConfig:
    alpha: float = 0.5
    beta: float = 1.0
    sigma: float = 2.0
    mu: float = 3.0
    n: int = 1
    points: int = 4096
    length: float = 200.0
    width: float = 0.2
    t_min: float = 5.0
    t_max: float = 50.0
    samples: int = 24
    r: float = 1.0
    tolerance: float = 0.05


@dataclass
class ResidualConfig:
    cases: tuple = (("cp1", 0.4, 1.0, 3.0), ("cp2", 0.75, 2.0, 1.0))
    sigma: float = 2.0
    points: int = 64
    length: float = 40.0
    steps: tuple = (64, 128, 256, 512)
    t_max: float = 1.0
    order_slack: float = 0.25
    max_residual: float = 1e-3


@dataclass
class RetardedConfig:
    """Zero-mean bump ``psi`` driven by ``f = (1 + tau)^(theta - 1) psi``."""

    alpha: float = 0.5
    beta: float = 1.0
    sigma: float = 0.3
    mu: float = 3.0
    gamma: float = 0.75
    p: float = 2.5
    q: float = 5.0
    points: int = 1024
    length: float = 40.0
    width: float = 0.5
    dt: float = 1 / 64
    horizons: tuple = (1.0, 2.0, 4.0)
    spread: float = 0.10


@dataclass
class MixedNormConfig:
    """Narrow unit-mass Gaussian; ``L^1 -> L^inf`` decay ``t^-(alpha n / sigma)``."""

    alpha: float = 0.5
    beta: float = 1.0
    sigma: float = 2.0
    mu: float = 3.0
    points: int = 8192
    length: float = 40.0
    width: float = 0.01
    t_min: float = 1e-9
    samples: int = 200
    horizons: tuple = (1.0, 2.0, 4.0)
    admissible: tuple = (2.0, 3.0)
    inadmissible: tuple = (6.0,)
    spread: float = 0.15


@dataclass
class SuiteConfig:
    decay: DecayConfig = field(default_factory=DecayConfig)
    residual: ResidualConfig = field(default_factory=ResidualConfig)
    retarded: RetardedConfig = field(default_factory=RetardedConfig)
    mixed: MixedNormConfig = field(default_factory=MixedNormConfig)
    seed: int = 1


# ---------------------------------------------------------------------------
# bounds: special cases, sandwich, norm inequalities
# ---------------------------------------------------------------------------

def special_case_errors() -> dict:
    """Maximum relative error of the classical closed forms on ``[-5, 5]``."""
    z = np.linspace(-5, 5, 201)
    out = {}
    out["exp"] = _rel(mittag_leffler(1, 1, z).real, np.exp(z))
    # E_{1/2,1}(-x) = exp(x^2) erfc(x); the full line via erfcx
    out["erfc"] = _rel(mittag_leffler(0.5, 1, z).real, special.erfcx(-z))
    out["cosh"] = _rel(mittag_leffler(2, 1, z ** 2).real, np.cosh(z))
    nz = z[z != 0]
    out["sinh"] = _rel(mittag_leffler(2, 2, nz ** 2).real, np.sinh(nz) / nz)
    split = mittag_leffler(2, 1, -z ** 2) + 1j * z * mittag_leffler(2, 2, -z ** 2)
    out["exp_i"] = _rel(split, np.exp(1j * z))
    return out


def _rel(a, b):
    a, b = np.asarray(a), np.asarray(b)
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(b), 1e-300)))


def sandwich_violations(alphas=(0.3, 0.5, 0.8, 1.0), samples=200, slack=1e-10) -> dict:
    x = np.logspace(-3, 3, samples)
    out = {}
    for a in alphas:
        for b in sorted({1.0, a, a + 0.5, 2.0}):
            v = sandwich_normaliser(a, b) * mittag_leffler(a, b, -x).real
            bp = [ml_sandwich_bounds(a, b, float(xx)) for xx in x]
            lo = np.array([p.lower for p in bp])
            hi = np.array([p.upper for p in bp])
            out[(a, b)] = int(np.sum(v < lo - slack) + np.sum(v > hi + slack))
    return out


def norm_inequality_cases():
    """``(n, sigma, r, s)`` tuples covering all three (r, s) conditions."""
    cases = [(1, 2.0, 1.0, 0.5), (1, 2.0, 1.5, 0.0), (1, 2.0, 1.5, 0.5),
             (2, 3.0, 1.0, 0.5), (2, 3.0, 1.5, 0.0), (2, 3.0, 1.5, 1.0),
             (3, 2.0, 2.0, 0.0), (3, 2.0, 1.5, 1.5), (1, 0.8, 1.0, 0.6), (1, 0.8, 1.5, 0.5)]
    for c in cases:
        lemma_condition(c[2], c[1], c[0], c[3])
    return cases


def norm_inequality_reports(times=(0.5, 1.0, 2.0, 5.0), alphas=(0.3, 0.5, 0.8, 1.0),
                            lams=(0.5, 3.0), coefficient="corrected") -> list:
    """Quadratured left sides against closed right sides; one report per (constant, case)."""
    reports = []
    for (n, sg, r, s) in norm_inequality_cases():
        worst_c, worst_d = 0.0, 0.0
        for a in alphas:
            for lam in lams:
                for t in times:
                    for b in (a, 1.0, a + 0.7):
                        lhs, _ = lhs_C(r, sg, n, s, a, b, lam, t)
                        worst_c = max(worst_c, lhs / rhs_C(r, sg, n, s, a, b, lam, t,
                                                           coefficient=coefficient))
                    lhs, _ = lhs_D(r, sg, n, s, a, lam, t)
                    worst_d = max(worst_d, lhs / rhs_D(r, sg, n, s, a, lam, t,
                                                       coefficient=coefficient))
        tag = f"n={n}:sigma={sg:g}:r={r:g}:s={s:g}"
        reports.append(EstimateReport(f"bounds:ineqC:{coefficient}:{tag}", 1.0, worst_c, 1e-9,
                                      "le", details={"measured": "max lhs/rhs"}))
        reports.append(EstimateReport(f"bounds:ineqD:{coefficient}:{tag}", 1.0, worst_d, 1e-9,
                                      "le", details={"measured": "max lhs/rhs"}))
    return reports


def suite_bounds(cfg: SuiteConfig | None = None) -> list:
    reports = [EstimateReport(f"bounds:special:{k}", 0.0, v, 1e-10)
               for k, v in special_case_errors().items()]
    for (a, b), v in sandwich_violations().items():
        reports.append(EstimateReport(f"bounds:sandwich:a={a:g}:b={b:g}", 0.0, float(v), 0.0))
    reports += norm_inequality_reports()
    return reports


# ---------------------------------------------------------------------------
# mellin
# ---------------------------------------------------------------------------

def mellin_tuples(count=50, seed=1) -> list:
    """Admissible ``(n, r, s, sigma, a, b, shift)`` samples; half use the weighted form."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        n = int(rng.integers(1, 4))
        sigma = float(rng.uniform(0.5, 4))
        r = float(rng.uniform(1, 3))
        weighted = len(out) % 2 == 1
        s = float(rng.uniform(0, n / r))
        a = 2 * r if weighted else float(rng.uniform(0.5, 4))
        shift = sigma if weighted else 0.0
        A = (n - r * s + r * shift) / sigma
        if not 0.05 < A < a - 0.05:
            continue
        out.append((n, r, s, sigma, a, float(rng.uniform(0.2, 5)), shift))
    return out


def suite_mellin(cfg: SuiteConfig | None = None) -> list:
    seed = cfg.seed if cfg else 1
    reports = []
    for i, (n, r, s, sg, a, b, sh) in enumerate(mellin_tuples(seed=seed)):
        lhs = mellin_lhs(n, r, s, sg, a, b, sh)
        rhs = mellin_rhs(n, r, s, sg, a, b, sh)
        reports.append(EstimateReport(f"mellin:{i:02d}", 0.0, abs(lhs - rhs) / rhs, 1e-8,
                                      details={"params": [n, r, s, sg, a, b, sh]}))
    return reports


# ---------------------------------------------------------------------------
# symbols
# ---------------------------------------------------------------------------

SYMBOL_SETS = (ModelParams(0.5, 1.0, 2.0, 3.0), ModelParams(0.4, 0.9, 1.0, 1.0),
               ModelParams(0.3, 0.8, 1.5, 2.0), ModelParams(0.8, 1.8, 2.0, 0.5),
               ModelParams(0.75, 2.0, 1.0, 2.0), ModelParams(1.0, 2.5, 1.0, 4.0))


def symbol_oracle_errors(p: ModelParams, ts=(0.2, 0.5, 1.0, 2.0, 5.0),
                         xs=(0.0, 0.3, 1.0, 2.0, 3.0)) -> dict:
    ts, xs = np.asarray(ts), np.asarray(xs)
    laplace = {"N": laplace_symbol_U0, "M": laplace_symbol_M, "J": laplace_symbol_U1}
    out = {}
    for name, lap in laplace.items():
        vals = SYMBOLS[name](ts[:, None], xs[None, :], p)
        ref = np.array([[talbot_invert(lambda s, x=x: lap(s, x, p), t).real for x in xs]
                        for t in ts])
        out[name] = _rel(vals, ref)
    return out


def laplace_pair_errors(count=20, seed=1) -> float:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(count):
        a, b, g = rng.uniform(0.2, 1), rng.uniform(0.5, 2), rng.uniform(0.5, 2)
        lam = -rng.uniform(0.1, 3)
        t = math.exp(rng.uniform(math.log(0.1), math.log(10)))
        v = talbot_invert(lambda s: s ** (a * g - b) / (s ** a - lam) ** g, t).real
        ex = t ** (b - 1) * mittag_leffler(a, b, lam * t ** a, g).real
        worst = max(worst, abs(v - ex) / abs(ex))
    return worst


def root_errors(count=100) -> tuple:
    worst_prod = worst_sum = 0.0
    for mu in np.linspace(0.05, 6, count):
        r = roots(float(mu))
        worst_prod = max(worst_prod, abs(r.lambda_plus * r.lambda_minus - 1))
        worst_sum = max(worst_sum, abs(r.lambda_plus + r.lambda_minus - mu))
    return worst_prod, worst_sum


def critical_mismatch(eps=1e-6) -> float:
    ts, xs = np.array([0.5, 1.0, 2.0]), np.array([0.3, 1.0, 2.0])
    worst = 0.0
    for name, fn in SYMBOLS.items():
        c = fn(ts[:, None], xs[None, :], ModelParams(0.5, 1.0, 2.0, 2.0))
        for mu in (2 - eps, 2 + eps):
            v = fn(ts[:, None], xs[None, :], ModelParams(0.5, 1.0, 2.0, mu))
            worst = max(worst, float(np.max(np.abs(v - c))))
    return worst


def suite_symbols(cfg: SuiteConfig | None = None) -> list:
    reports = [EstimateReport("symbols:laplace_pair", 0.0, laplace_pair_errors(), 1e-6)]
    prod, tot = root_errors()
    reports.append(EstimateReport("symbols:roots:product", 0.0, prod, 1e-14))
    reports.append(EstimateReport("symbols:roots:sum", 0.0, tot, 1e-14))
    reports.append(EstimateReport("symbols:roots:critical_limit", 0.0, critical_mismatch(), 1e-4))
    for i, p in enumerate(SYMBOL_SETS):
        for name, err in symbol_oracle_errors(p).items():
            reports.append(EstimateReport(f"symbols:talbot:{i}:{name}", 0.0, err, 1e-6,
                                          details={"params": _params_dict(p)}))
    return reports


def _params_dict(p: ModelParams) -> dict:
    return {k: getattr(p, k) for k in ("alpha", "beta", "sigma", "mu", "n")}


# ---------------------------------------------------------------------------
# decay
# ---------------------------------------------------------------------------

def decay_scenario(cfg: DecayConfig, workers=None) -> dict:
    """Sup-norm decay of the data-only solution and of the ``W^{sigma,inf}`` block.

    The second series applies ``|xi|^sigma E_{a,a}(-|xi|^sigma t^a)`` to the
    data: the Sobolev block whose ``L^1 -> L^inf`` exponent is ``-a - a n/sigma``.
    """
    p = ModelParams(cfg.alpha, cfg.beta, cfg.sigma, cfg.mu, cfg.n)
    grid = Grid(cfg.n, cfg.points, cfg.length)
    w = cfg.width
    u0 = SpectralField.from_function(
        grid, lambda *x: np.exp(-sum(c * c for c in x) / (2 * w * w)))
    times = np.geomspace(cfg.t_min, cfg.t_max, cfg.samples)
    traj = solve_cp1(u0, None, p, times, workers) if cfg.alpha <= 0.5 else \
        solve_cp2(u0, SpectralField.zeros(grid), None, p, times, workers)
    sup = traj.norms(math.inf)
    a, sg = cfg.alpha, cfg.sigma

    def block(t):
        return lambda x: x ** sg * mittag_leffler(a, a, -(x ** sg) * t ** a).real

    sob = np.array([lq_norm(apply_multiplier(u0, block(t), workers), math.inf) for t in times])
    return {"times": times, "sup": sup, "sobolev": sob,
            "slope_sup": fit_decay_exponent(times, sup),
            "slope_sobolev": fit_decay_exponent(times, sob)}


def suite_decay(cfg: SuiteConfig | None = None) -> list:
    dc = (cfg or SuiteConfig()).decay
    out = decay_scenario(dc)
    base = dict(alpha=dc.alpha, sigma=dc.sigma, n=dc.n, p=dc.r, q=math.inf, beta=dc.beta)
    lq = ExponentClaim(Setting.LP_LQ, **base)
    ws = ExponentClaim(Setting.LP_WSQ, **base)
    return [
        EstimateReport(lq.claim_id, lq.predicted_exponent, out["slope_sup"], dc.tolerance,
                       details={"window": [dc.t_min, dc.t_max]}),
        EstimateReport(ws.claim_id, ws.predicted_exponent, out["slope_sobolev"], dc.tolerance,
                       details={"window": [dc.t_min, dc.t_max]}),
    ]


# ---------------------------------------------------------------------------
# residual
# ---------------------------------------------------------------------------

def residual_study(problem, alpha, beta, mu, cfg: ResidualConfig, workers=None) -> dict:
    """Residuals of the forced problem ``f = t^2 exp(-x^2/4)`` under step halving."""
    p = ModelParams(alpha, beta, cfg.sigma, mu, 1)
    grid = Grid(1, cfg.points, cfg.length)
    psi = np.exp(-grid.coords()[0] ** 2 / 4)

    def f(t):
        return t * t * psi

    zero = SpectralField.zeros(grid)
    res = []
    for m in cfg.steps:
        times = np.linspace(0, cfg.t_max, m + 1)
        traj = solve_cp1(zero, f, p, times, workers) if problem == "cp1" else \
            solve_cp2(zero, zero, f, p, times, workers)
        res.append(residual_cp(traj, f))
    res = np.array(res)
    orders = np.log2(res[:-1] / res[1:])
    return {"steps": list(cfg.steps), "residuals": res, "orders": orders,
            "target": (2 - 2 * alpha) - cfg.order_slack}


def suite_residual(cfg: SuiteConfig | None = None) -> list:
    rc = (cfg or SuiteConfig()).residual
    reports = []
    for problem, a, b, mu in rc.cases:
        out = residual_study(problem, a, b, mu, rc)
        tag = f"residual:{problem}:a={a:g}"
        reports.append(EstimateReport(f"{tag}:order", out["target"], float(out["orders"][-1]),
                                      0.0, "ge", details={"orders": out["orders"]}))
        reports.append(EstimateReport(f"{tag}:finest", rc.max_residual,
                                      float(out["residuals"][-1]), 0.0, "le"))
    return reports


# ---------------------------------------------------------------------------
# regions
# ---------------------------------------------------------------------------

def _brute_R12(x, y, eps, n):
    m, half = min(n, eps), Fraction(n, 2)
    return half <= x and x < m and max(0, x - m) < y and y <= x - half


def _brute_R3(x, y, nu, eps, n):
    m = min(n, eps)
    return nu < x and x < m and max(0, x - m) < y and y <= x - nu


def region_mismatches(n=1, grid=24) -> int:
    """Disagreements between the predicates and a direct evaluation on rational samples.

    Exponents are exact fractions so boundary points are not decided by rounding.
    """
    bad = 0
    fr = [Fraction(k, grid) for k in range(1, grid + 1)]   # values of 1/p and 1/q
    for eps in (0.3, 0.6, 0.9, 1.4):
        for nu in (0.1, 0.25, 0.5):
            for ip in fr:
                for iq in [Fraction(0)] + fr:
                    p = 1 / ip
                    q = math.inf if iq == 0 else 1 / iq
                    x, y = n * ip, n * iq
                    bad += in_region_R12(p, q, eps, n) != _brute_R12(x, y, eps, n)
                    bad += in_region_R3(p, q, nu, eps, n) != _brute_R3(x, y, nu, eps, n)
    return bad


def suite_regions(cfg: SuiteConfig | None = None) -> list:
    reports = [EstimateReport("regions:brute_force", 0.0, float(region_mismatches()), 0.0)]
    rep = check_assumptions(ModelParams(0.8, 1.6, 1.0, 1.0), 0.9, (2.0, math.inf))
    reports.append(EstimateReport("regions:root_argument_mu1", math.pi / 3,
                                  abs(rep.root_arguments[0]), 1e-12))
    reports.append(EstimateReport("regions:S0_example", 1.0,
                                  float(in_region_S(1.0, 0.5, 0.9, 1, "S0")), 0.0))
    return reports


# ---------------------------------------------------------------------------
# strichartz
# ---------------------------------------------------------------------------

def retarded_study(cfg: RetardedConfig, workers=None) -> dict:
    """``sup_t ||R(t)||_q / ||f||_{L^inf L^q}`` for each horizon."""
    p = ModelParams(cfg.alpha, cfg.beta, cfg.sigma, cfg.mu, 1)
    theta = strichartz_theta(cfg.p, cfg.q, cfg.gamma, cfg.sigma, cfg.alpha, 1, "cp1")
    if not 0 < theta < 1:
        raise ConfigurationError(f"theta = {theta:g} must lie in (0, 1)")
    grid = Grid(1, cfg.points, cfg.length)
    w = cfg.width
    psi = SpectralField.from_function(grid, lambda x: (1 - (x / w) ** 2) * np.exp(-(x / w) ** 2 / 2))
    f_norm = lq_norm(psi, cfg.q)                # attained at tau = 0
    ratios = []
    for T in cfg.horizons:
        times = cfg.dt * np.arange(int(round(T / cfg.dt)) + 1)
        traj = solve_cp1(SpectralField.zeros(grid), lambda t: psi * (1 + t) ** (theta - 1),
                         p, times, workers)
        ratios.append(float(np.max(traj.norms(cfg.q))) / f_norm)
    return {"theta": theta, "ratios": ratios,
            "assumptions": check_assumptions(p, cfg.gamma, (cfg.p, cfg.q))}


def mixed_norm_study(cfg: MixedNormConfig, workers=None) -> dict:
    """Prefactors ``||u||_{L^s(0,T; L^inf)} / T^(1/s - theta)`` per horizon and ``s``."""
    p = ModelParams(cfg.alpha, cfg.beta, cfg.sigma, cfg.mu, 1)
    # L^1 data: gamma - sigma/alpha = 0 in the first-problem bound
    bound = strichartz_s_bound(1, math.inf, cfg.sigma / cfg.alpha, cfg.sigma, cfg.alpha, 1, "cp1")
    theta = 1 / bound.value
    grid = Grid(1, cfg.points, cfg.length)
    w = cfg.width
    u0 = SpectralField.from_function(
        grid, lambda x: np.exp(-x * x / (2 * w * w)) / (w * math.sqrt(2 * math.pi)))
    exps = tuple(cfg.admissible) + tuple(cfg.inadmissible)
    pref = {s: [] for s in exps}
    for T in cfg.horizons:
        times = np.geomspace(cfg.t_min, T, cfg.samples)
        norms = solve_cp1(u0, None, p, times, workers).norms(math.inf)
        for s in exps:
            val = float(np.trapezoid(norms ** s, times) ** (1 / s))
            pref[s].append(val / T ** (1 / s - theta))
    return {"bound": bound, "theta": theta, "prefactors": pref}


def _spread(vals):
    return max(vals) / min(vals) - 1


def suite_strichartz(cfg: SuiteConfig | None = None) -> list:
    cfg = cfg or SuiteConfig()
    reports = []
    rs = retarded_study(cfg.retarded)
    reports.append(EstimateReport("strichartz:retarded:spread", 0.0, _spread(rs["ratios"]),
                                  cfg.retarded.spread, details={"ratios": rs["ratios"]}))
    for t in (1.0, 2.0, 4.0):
        th = rs["theta"]
        reports.append(EstimateReport(f"strichartz:lambda:t={t:g}", lambda_closed(th),
                                      lambda_quadrature(th, t), 1e-8 * lambda_closed(th)))
    ms = mixed_norm_study(cfg.mixed)
    for s in cfg.mixed.admissible:
        reports.append(EstimateReport(f"strichartz:mixed:s={s:g}:spread", 0.0,
                                      _spread(ms["prefactors"][s]), cfg.mixed.spread,
                                      details={"prefactors": ms["prefactors"][s],
                                               "s_bound": ms["bound"].value}))
    for s in cfg.mixed.inadmissible:
        pf = ms["prefactors"][s]
        monotone = float(all(b > a for a, b in zip(pf, pf[1:])))
        reports.append(EstimateReport(f"strichartz:mixed:s={s:g}:growth", 1.0, monotone, 0.0,
                                      details={"prefactors": pf, "s_bound": ms["bound"].value}))
    return reports


# ---------------------------------------------------------------------------
# Driver
# ---------------------------------------------------------------------------

SUITES = {
    "bounds": suite_bounds,
    "mellin": suite_mellin,
    "symbols": suite_symbols,
    "decay": suite_decay,
    "residual": suite_residual,
    "regions": suite_regions,
    "strichartz": suite_strichartz,
}


def run_suites(names, cfg: SuiteConfig | None = None, workers: int | None = None) -> list:
    """Run the named suites (``"all"`` expands to every suite) and sort the reports."""
    names = list(SUITES) if "all" in names else list(names)
    for n in names:
        if n not in SUITES:
            raise ConfigurationError(f"unknown suite {n!r}; choose from {sorted(SUITES)} or all")
    cfg = cfg or SuiteConfig()
    workers = workers or min(len(names), default_workers())
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        results = list(pool.map(lambda n: SUITES[n](cfg), names))
    return sorted((r for rs in results for r in rs), key=lambda r: r.claim_id)
