"""Acceptance criteria 1-12.

Each test records a ``PASS``/``FAIL`` line through the ``acceptance`` fixture;
the lines are repeated in the terminal summary. Tolerances are fixed by the
criteria and are not tuned here.
"""

import math
import time

import mpmath as mp
import numpy as np
from scipy import integrate

from sigmaevo.estimates import (
    ExponentClaim, Setting, lambda_closed, lambda_quadrature, mellin_lhs, mellin_rhs,
)
from sigmaevo.kernels import hankel_transform, kernel_K
from sigmaevo.ml import mittag_leffler
from sigmaevo.spectral import symbol_J_hat, symbol_M_hat, symbol_N_hat
from sigmaevo.verify import (
    SYMBOL_SETS, DecayConfig, MixedNormConfig, ResidualConfig, RetardedConfig, critical_mismatch,
    decay_scenario, laplace_pair_errors, mellin_tuples, mixed_norm_study,
    norm_inequality_reports, residual_study, retarded_study, root_errors, sandwich_violations,
    special_case_errors, symbol_oracle_errors,
)


def _spread(vals):
    return max(vals) / min(vals) - 1


def _mp_symbol(kind, t, xi, p):
    a, b, mu, v = p.alpha, p.beta, p.mu, xi ** p.sigma
    with mp.workdps(30):
        def den(s):
            return s ** (2 * a) + mu * v * s ** a + v * v
        F = {"N": lambda s: (s ** (2 * a - 1) + mu * v * s ** (a - 1)) / den(s),
             "M": lambda s: s ** (2 * a - b) / den(s),
             "J": lambda s: s ** (2 * a - 2) / den(s)}[kind]
        return float(mp.invertlaplace(F, t, method="talbot"))


def test_criterion_01_special_cases(acceptance):
    start = time.perf_counter()
    errs = special_case_errors()
    elapsed = time.perf_counter() - start
    worst = max(errs.values())
    ok = worst <= 1e-10 and elapsed < 1.0
    acceptance(1, ok, f"max rel err {worst:.2e} (<= 1e-10), {elapsed:.3f}s (< 1s)")
    assert ok


def test_criterion_02_sandwich(acceptance):
    viol = sandwich_violations(alphas=(0.3, 0.5, 0.8, 1.0), samples=200, slack=1e-10)
    total = sum(viol.values())
    acceptance(2, total == 0, f"{total} violations over {len(viol)} (alpha, beta) cases")
    assert total == 0


def test_criterion_03_laplace_identity(acceptance):
    worst = laplace_pair_errors(count=20, seed=1)
    # independent spot check of the time-domain side in extended precision
    a, b, g, lam, t = 0.6, 1.3, 1.7, -0.8, 2.5
    with mp.workdps(30):
        ref = float(mp.invertlaplace(lambda s: s ** (a * g - b) / (s ** a - lam) ** g, t,
                                     method="talbot"))
    ex = t ** (b - 1) * mittag_leffler(a, b, lam * t ** a, g).real
    spot = abs(ex - ref) / abs(ref)
    ok = worst <= 1e-6 and spot <= 1e-6
    acceptance(3, ok, f"20 random pairs max rel err {worst:.2e}, mp spot check {spot:.2e} (<= 1e-6)")
    assert ok


def test_criterion_04_roots(acceptance):
    prod, tot = root_errors(count=100)
    crit = critical_mismatch(1e-6)
    ok = prod <= 1e-14 and tot <= 1e-14 and crit <= 1e-4
    acceptance(4, ok, f"product {prod:.1e}, sum {tot:.1e} (<= 1e-14); critical limit {crit:.1e} (<= 1e-4)")
    assert ok


def test_criterion_05_symbol_oracle(acceptance):
    worst = 0.0
    for p in SYMBOL_SETS:
        worst = max(worst, *symbol_oracle_errors(p).values())
    branches = {("over" if p.mu > 2 else "under" if p.mu < 2 else "critical") for p in SYMBOL_SETS}
    ranges = {p.alpha <= 0.5 for p in SYMBOL_SETS}
    fns = {"N": symbol_N_hat, "M": symbol_M_hat, "J": symbol_J_hat}
    spot = 0.0
    for p, kind in zip(SYMBOL_SETS, "NMJNMJ"):
        ref = _mp_symbol(kind, 1.0, 1.0, p)
        spot = max(spot, abs(float(fns[kind](1.0, 1.0, p)) - ref) / abs(ref))
    ok = worst <= 1e-6 and spot <= 1e-6 and len(branches) == 3 and len(ranges) == 2
    acceptance(5, ok, f"5x5 grids x {len(SYMBOL_SETS)} sets max rel err {worst:.2e}, "
                      f"mp spot check {spot:.2e} (<= 1e-6)")
    assert ok


def test_criterion_06_residual(acceptance):
    cfg = ResidualConfig()
    parts, ok = [], True
    for problem, a, b, mu in cfg.cases:
        out = residual_study(problem, a, b, mu, cfg)
        order, finest = float(out["orders"][-1]), float(out["residuals"][-1])
        good = order >= (2 - 2 * a) - 0.25 and finest <= 1e-3
        ok &= good
        parts.append(f"{problem} a={a:g}: order {order:.3f} (>= {(2 - 2 * a) - 0.25:.2f}), "
                     f"finest {finest:.2e}")
    acceptance(6, ok, "; ".join(parts))
    assert ok


def test_criterion_07_mellin(acceptance):
    tuples = mellin_tuples(count=50, seed=1)
    worst = max(abs(mellin_lhs(*c) - mellin_rhs(*c)) / mellin_rhs(*c) for c in tuples)
    ok = len(tuples) == 50 and worst <= 1e-8
    acceptance(7, ok, f"{len(tuples)} tuples, max rel err {worst:.2e} (<= 1e-8)")
    assert ok


def test_criterion_08_norm_inequalities(acceptance):
    reports = norm_inequality_reports(times=(0.5, 1.0, 2.0, 5.0))
    bad = [r.claim_id for r in reports if not r.measured <= 1.0]
    worst = max(r.measured for r in reports)
    acceptance(8, not bad, f"{len(bad)} violations in {len(reports)} cases, max lhs/rhs {worst:.4f}")
    assert not bad


def test_criterion_09_dispersive_decay(acceptance):
    cfg = DecayConfig()
    out = decay_scenario(cfg)
    base = dict(alpha=cfg.alpha, sigma=cfg.sigma, n=cfg.n, p=cfg.r, q=math.inf)
    sup_pred = ExponentClaim(Setting.LP_LQ, **base).predicted_exponent
    sob_pred = -cfg.alpha - (cfg.alpha / cfg.sigma) * (cfg.n / cfg.r)
    ok = (sup_pred == -0.25 and abs(out["slope_sup"] - sup_pred) <= 0.05
          and abs(out["slope_sobolev"] - sob_pred) <= 0.05)
    acceptance(9, ok, f"sup slope {out['slope_sup']:.4f} vs {sup_pred}; "
                      f"W-block slope {out['slope_sobolev']:.4f} vs {sob_pred} (+-0.05)")
    assert ok


def test_criterion_10_hankel(acceptance):
    taus = np.linspace(0.2, 6, 25)
    phi = lambda r: np.exp(-0.7 * r * r) * (1 + r * r)           # noqa: E731
    cos_ref = [math.sqrt(2 / math.pi) * integrate.quad(phi, 0, np.inf, weight="cos", wvar=t)[0]
               for t in taus]
    cos_err = float(np.max(np.abs(hankel_transform(phi, -0.5, taus).values - cos_ref)))
    gauss = hankel_transform(lambda r: np.exp(-r * r), 0.0, taus).values
    gauss_err = float(np.max(np.abs(gauss - 0.5 * np.exp(-taus ** 2 / 4))))
    r = np.linspace(0.05, 6, 60)
    heat_err = 0.0
    for t in (0.5, 1.0, 2.0):
        k = kernel_K(t, r, 0.0, 1.0, 1.0, 2.0, 1.0, n=1).values
        heat_err = max(heat_err, float(np.max(np.abs(
            k - np.exp(-r * r / (4 * t)) / math.sqrt(4 * math.pi * t)))))
    ok = cos_err <= 1e-8 and gauss_err <= 1e-8 and heat_err <= 1e-6
    acceptance(10, ok, f"cosine {cos_err:.1e}, Gaussian {gauss_err:.1e} (<= 1e-8); "
                       f"heat kernel {heat_err:.1e} (<= 1e-6)")
    assert ok


def test_criterion_11_retarded(acceptance):
    cfg = RetardedConfig()
    out = retarded_study(cfg)
    spread = _spread(out["ratios"])
    th = out["theta"]
    lam_err = max(abs(lambda_quadrature(th, t) - lambda_closed(th)) / lambda_closed(th)
                  for t in (1.0, 2.0, 4.0))
    finite = all(math.isfinite(v) for v in out["ratios"])
    ok = finite and spread < 0.10 and lam_err <= 1e-8
    acceptance(11, ok, f"ratios {[round(v, 4) for v in out['ratios']]}, spread {spread:.2%} "
                       f"(< 10%); Lambda rel err {lam_err:.1e} (<= 1e-8)")
    assert ok


def test_criterion_12_mixed_norms(acceptance):
    cfg = MixedNormConfig()
    out = mixed_norm_study(cfg)
    bound = out["bound"]
    parts, ok = [], True
    for s in cfg.admissible:
        pf = out["prefactors"][s]
        good = bound.admits(s) and all(math.isfinite(v) for v in pf) and _spread(pf) < 0.15
        ok &= good
        parts.append(f"s={s:g} spread {_spread(pf):.2%}")
    for s in cfg.inadmissible:
        pf = out["prefactors"][s]
        good = not bound.admits(s) and all(b > a for a, b in zip(pf, pf[1:]))
        ok &= good
        parts.append(f"s={s:g} growth {'monotone' if good else 'not monotone'}")
    acceptance(12, ok, f"s-bound {bound.value:.3g}; " + ", ".join(parts))
    assert ok
