"""Constants, Mellin integrals, admissibility regions and exponent bookkeeping.

Region predicates take ``p, q`` in ``[1, inf]`` and work with the pair
``(n/p, n/q)``; ``q = inf`` maps to ``n/q = 0``.
"""

from __future__ import annotations

import csv
import enum
import json
import math
from fractions import Fraction
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
from scipy import integrate, optimize, special

from .errors import DivergentIntegralError, DomainError, PreconditionError, UnsupportedCaseError
from .kernels import bessel_ratio
from .ml import mittag_leffler, podlubny_constant
from .spectral import Branch, ModelParams, roots

SCHEMA_VERSION = 1


# ---------------------------------------------------------------------------
# Elementary constants
# ---------------------------------------------------------------------------

def sphere_measure(n: int) -> float:
    """Surface measure of the unit sphere in R^n."""
    if int(n) != n or n < 1:
        raise DomainError(f"dimension must be a positive integer, got {n}")
    return 2 * math.pi ** (n / 2) / math.gamma(n / 2)


def _conjugate(s: float) -> float:
    if s == 1:
        return math.inf
    if math.isinf(s):
        return 1.0
    return s / (s - 1)


def young_sharp_constant(s: float) -> float:
    """``sqrt(s^(1/s) s'^(-1/s'))``; both endpoints give 1."""
    if not s >= 1:
        raise DomainError(f"s must lie in [1, inf], got {s}")
    if s == 1 or math.isinf(s):
        return 1.0
    sp = _conjugate(s)
    return math.sqrt(s ** (1 / s) * sp ** (-1 / sp))


def bessel_sup_bound(n: int, z_max: float = 200.0, samples: int = 200_001) -> float:
    """``sup_{z>0} |z^(1-n/2) J_{n/2-1}(z)|`` by sampling plus local refinement.

    For ``n >= 1`` the order is ``>= -1/2`` and the Poisson integral caps the
    value by ``1 / (2^nu Gamma(nu+1))`` (the limit at ``z -> 0``).
    """
    nu = n / 2 - 1
    z = np.concatenate([[1e-12], np.linspace(1e-6, z_max, samples)])
    vals = np.abs(bessel_ratio(nu, z))
    i = int(np.argmax(vals))
    best = float(vals[i])
    if 0 < i < z.size - 1:
        res = optimize.minimize_scalar(lambda x: -abs(float(bessel_ratio(nu, np.array([x]))[0])),
                                       bounds=(z[i - 1], z[i + 1]), method="bounded",
                                       options={"xatol": 1e-13})
        best = max(best, -float(res.fun))
    cap = 1 / (2 ** nu * math.gamma(nu + 1))
    if best > cap * (1 + 1e-12):
        raise ArithmeticError(f"sampled sup {best} exceeds the Poisson-integral cap {cap}")
    return best


# ---------------------------------------------------------------------------
# Mellin integrals
# ---------------------------------------------------------------------------

def _mellin_exponent(n, r, s, sigma, a, shift):
    if not sigma > 0 or not a > 0:
        raise DomainError("sigma and a must be positive")
    A = (n - r * s + r * shift) / sigma
    if not 0 < A < a:
        raise DivergentIntegralError(
            f"integral diverges: need 0 < (n - r s + r shift)/sigma < a, got {A:g} with a={a:g}")
    return A


def mellin_lhs(n, r, s, sigma, a, b=1.0, shift=0.0) -> float:
    """Quadrature of ``int_0^inf rho^(sigma A - 1) (1 + b rho^sigma)^(-a) d rho``.

    ``A = (n - r s + r shift) / sigma``. ``shift = 0`` is the plain identity;
    ``shift = sigma`` with ``a = 2r`` is the weighted one behind ``D``.
    Both halves are integrated with algebraic end-point weights.
    """
    A = _mellin_exponent(n, r, s, sigma, a, shift)
    if not b > 0:
        raise DomainError(f"b must be positive, got {b}")
    head = integrate.quad(lambda x: (1 + b * x ** sigma) ** (-a), 0, 1, weight="alg",
                          wvar=(sigma * A - 1, 0), epsabs=0, epsrel=1e-13, limit=200)[0]
    # rho = 1/v on (1, inf)
    tail = integrate.quad(lambda v: (v ** sigma + b) ** (-a), 0, 1, weight="alg",
                          wvar=(sigma * (a - A) - 1, 0), epsabs=0, epsrel=1e-13, limit=200)[0]
    return head + tail


def mellin_rhs(n, r, s, sigma, a, b=1.0, shift=0.0) -> float:
    """``Gamma(A) Gamma(a - A) / (sigma Gamma(a)) b^(-A)``."""
    A = _mellin_exponent(n, r, s, sigma, a, shift)
    if not b > 0:
        raise DomainError(f"b must be positive, got {b}")
    return math.exp(special.gammaln(A) + special.gammaln(a - A) - special.gammaln(a)
                    - A * math.log(b)) / sigma


# ---------------------------------------------------------------------------
# Lebesgue-norm constants of Mittag-Leffler profiles
# ---------------------------------------------------------------------------

def lemma_condition(r: float, sigma: float, n: int, s: float) -> str:
    """Which of the three (r, s) conditions holds; raises when none does."""
    if r == 1 and n - sigma < s < n:
        return "(i)"
    if s == 0 and max(1.0, n / sigma) < r < math.inf:
        return "(ii)"
    if 0 < s < n and max(1.0, n / (sigma + s)) < r < n / s:
        return "(iii)"
    raise UnsupportedCaseError(
        f"no condition holds for r={r}, sigma={sigma}, n={n}, s={s}: "
        "(i) r = 1 and n - sigma < s < n; (ii) s = 0 and max(1, n/sigma) < r; "
        "(iii) 0 < s < n and max(1, n/(sigma+s)) < r < n/s")


def tangent_coefficient(alpha: float, coefficient: str = "corrected") -> float:
    """Coefficient ``c`` in ``Gamma(a) E_{a,a}(-x) <= (1 + c x)^-2``.

    ``"corrected"`` is ``Gamma(1+a)/Gamma(1+2a)`` (tangent at 0); ``"printed"``
    is its square root, which fails near ``x = 0`` for ``a >= 1/2``.
    """
    c = math.gamma(1 + alpha) / math.gamma(1 + 2 * alpha)
    if coefficient == "corrected":
        return c
    if coefficient == "printed":
        return math.sqrt(c)
    raise DomainError(f"unknown coefficient variant {coefficient!r}")


def sector_argument(lam: complex) -> float:
    """``|arg(-lam)|``: the angle of the Mittag-Leffler argument ``-lam x`` for ``x > 0``."""
    return abs(np.angle(-complex(lam)))


def _sector_window(alpha):
    return math.pi * alpha / 2, min(math.pi, math.pi * alpha)


def default_sector_angle(alpha: float, lam: complex) -> float:
    """Angle ``theta`` inside ``(pi a/2, min(pi, pi a))`` and no larger than ``|arg(-lam)|``."""
    lo, hi = _sector_window(alpha)
    phi = sector_argument(lam)
    if phi <= lo:
        raise PreconditionError(
            f"|arg(-lambda)| = {phi:.6g} does not exceed pi*alpha/2 = {lo:.6g}")
    return min(phi, lo + 0.5 * (hi - lo)) if phi < hi else lo + 0.5 * (hi - lo)


def C_constant(r, sigma, n, s, alpha, beta, lam, theta=None,
               coefficient: str = "corrected") -> float:
    """Constant bounding ``|Gamma(b)|^r int |rho^-s E_{a,b}(-lam rho^s t^a)|^r rho^(n-1)`` at ``t = 1``.

    Branches: ``lam > 0`` with ``beta = alpha`` (double-power tangent bound),
    ``lam > 0`` with ``beta`` in ``{1} U (alpha, inf)`` (single-power bound),
    otherwise the sector bound with the calibrated Podlubny constant.
    """
    lemma_condition(r, sigma, n, s)
    A = (n - r * s) / sigma
    lam = complex(lam)
    positive = lam.imag == 0 and lam.real > 0
    lg = special.gammaln
    if positive and beta == alpha:
        c = tangent_coefficient(alpha, coefficient)
        return math.exp(lg(A) + lg(2 * r - A) - lg(2 * r) - A * math.log(c * lam.real)) / sigma
    if positive and (beta == 1 or beta > alpha):
        c = math.exp(lg(beta) - lg(beta + alpha))
        return math.exp(lg(A) + lg(r - A) - lg(r) - A * math.log(c * lam.real)) / sigma
    if lam == 0:
        raise UnsupportedCaseError("lambda = 0 gives a non-decaying profile")
    th = default_sector_angle(alpha, lam) if theta is None else theta
    if sector_argument(lam) < th:
        raise UnsupportedCaseError(
            f"|arg(-lambda)| = {sector_argument(lam):.6g} is below theta = {th:.6g}")
    cp = podlubny_constant(alpha, beta, th)
    return (cp * abs(math.gamma(beta))) ** r * math.exp(
        lg(A) + lg(r - A) - lg(r) - A * math.log(abs(lam))) / sigma


def D_constant(r, sigma, n, s, alpha, lam, coefficient: str = "corrected") -> float:
    """Constant bounding ``Gamma(a)^r int |rho^(sigma-s) E_{a,a}(-lam rho^sigma)|^r rho^(n-1)`` at ``t = 1``."""
    lemma_condition(r, sigma, n, s)
    if not (np.isreal(lam) and float(np.real(lam)) > 0):
        raise UnsupportedCaseError(f"only lambda > 0 is covered, got {lam}")
    lam = float(np.real(lam))
    A = (n + r * (sigma - s)) / sigma
    c = tangent_coefficient(alpha, coefficient)
    lg = special.gammaln
    return math.exp(lg(A) + lg(2 * r - A) - lg(2 * r) - A * math.log(c * lam)) / sigma


def _profile_norm(fn_log, lo=-60.0, hi=60.0, rtol=1e-11):
    """``int_R exp(fn_log(y)) dy`` by the trapezoid rule in ``y``.

    The range is cut where the integrand drops below 1e-16 of its peak. The
    integrand is analytic with two-sided decay, so the rule converges
    geometrically; the step is halved until two levels agree to ``rtol``.
    """
    y = np.linspace(lo, hi, 6001)
    vals = fn_log(y)
    peak = np.max(vals)
    keep = np.nonzero(vals > peak + math.log(1e-16))[0]
    a, b = y[max(keep[0] - 1, 0)], y[min(keep[-1] + 1, y.size - 1)]
    m = max(int(math.ceil((b - a) / 0.1)), 8)
    ys = np.linspace(a, b, m + 1)
    fv = np.exp(fn_log(ys))
    prev = integrate.trapezoid(fv, ys)
    for _ in range(8):
        mid = np.exp(fn_log(0.5 * (ys[1:] + ys[:-1])))
        merged = np.empty(2 * fv.size - 1)
        merged[0::2], merged[1::2] = fv, mid
        ys = np.linspace(a, b, merged.size)
        fv = merged
        cur = integrate.trapezoid(fv, ys)
        if abs(cur - prev) <= rtol * abs(cur):
            return cur, (a, b)
        prev = cur
    raise ArithmeticError(f"trapezoid rule not converged on [{a}, {b}]")


def lhs_C(r, sigma, n, s, alpha, beta, lam, t):
    """``(int_0^inf |rho^-s E_{a,b}(-lam rho^sigma t^a)|^r rho^(n-1) d rho)^(1/r)`` by quadrature.

    Returns ``(value, tail_bound)`` where ``tail_bound`` bounds the discarded
    tail from the single-power upper bound (``lam > 0`` and ``beta >= alpha``).
    """
    lam = complex(lam)

    def logf(y):
        rho = np.exp(y)
        z = -lam * rho ** sigma * t ** alpha
        e = np.abs(mittag_leffler(alpha, beta, z if lam.imag else z.real))
        with np.errstate(divide="ignore"):
            return r * np.log(e) + (n - r * s) * y

    val, (a, b) = _profile_norm(logf)
    tail = _tail_bound(r, sigma, n, -s, alpha, beta, lam, t, b)
    return val ** (1 / r), tail


def lhs_D(r, sigma, n, s, alpha, lam, t):
    """Quadrature of ``(int |rho^(sigma-s) E_{a,a}(-lam rho^sigma t^a)|^r rho^(n-1))^(1/r)``."""
    lam = float(np.real(lam))

    def logf(y):
        rho = np.exp(y)
        e = np.abs(mittag_leffler(alpha, alpha, -lam * rho ** sigma * t ** alpha))
        with np.errstate(divide="ignore"):
            return r * np.log(e) + (n + r * (sigma - s)) * y

    val, (a, b) = _profile_norm(logf)
    tail = _tail_bound(r, sigma, n, sigma - s, alpha, alpha, lam, t, b)
    return val ** (1 / r), tail


def _tail_bound(r, sigma, n, eta, alpha, beta, lam, t, y_hi):
    """Bound on the discarded part beyond ``exp(y_hi)``; ``nan`` if no sandwich bound applies."""
    lam = complex(lam)
    if not (lam.imag == 0 and lam.real > 0 and beta >= alpha):
        return math.nan
    c = math.gamma(beta) / math.gamma(beta + alpha) if beta != alpha else \
        tangent_coefficient(alpha)
    power = 1 if beta != alpha else 2
    k = r * power * sigma - (n + r * eta)
    if k <= 0:
        return math.inf
    rho = math.exp(y_hi)
    return (c * lam.real * t ** alpha) ** (-r * power) * rho ** (-k) / k / abs(math.gamma(beta)) ** r


def rhs_C(r, sigma, n, s, alpha, beta, lam, t, **kw) -> float:
    return (C_constant(r, sigma, n, s, alpha, beta, lam, **kw) ** (1 / r) / abs(math.gamma(beta))
            * t ** (-(alpha / sigma) * (n / r - s)))


def rhs_D(r, sigma, n, s, alpha, lam, t, **kw) -> float:
    return (D_constant(r, sigma, n, s, alpha, lam, **kw) ** (1 / r) / math.gamma(alpha)
            * t ** (-(alpha / sigma) * (n / r + sigma - s)))


# ---------------------------------------------------------------------------
# Regions and assumptions
# ---------------------------------------------------------------------------

def _ratios(p, q, n):
    for v in (p, q):
        if not v >= 1:
            raise DomainError(f"exponents must lie in [1, inf], got {v}")
    return n / p, (0 if math.isinf(q) else n / q)


def in_region_R12(p, q, epsilon, n) -> bool:
    x, y = _ratios(p, q, n)
    m = min(n, epsilon)
    half = Fraction(n, 2) if isinstance(n, int) else n / 2   # exact for rational inputs
    return (half <= x < m) and (max(0, x - m) < y <= x - half)


def in_region_R3(p, q, nu, epsilon, n) -> bool:
    x, y = _ratios(p, q, n)
    m = min(n, epsilon)
    return (nu < x < m) and (max(0.0, x - m) < y <= x - nu)


def region_R12_empty(epsilon, n) -> bool:
    """``n/2 <= n/p < min(n, eps)`` has no solution when ``eps <= n/2``."""
    return min(n, epsilon) <= n / 2


def region_R3_empty(nu, epsilon, n) -> bool:
    """Empty when ``nu < x < min(n, eps)`` and ``max(0, x - m) < x - nu`` cannot both hold."""
    m = min(n, epsilon)
    lo = max(nu, 0.0)
    if lo >= m:
        return True
    # need x - nu > max(0, x - m): x > nu always holds on the interval, and m > nu makes x - m < x - nu
    return not (m > nu)


def in_region_S(alpha, sigma, gamma, n, which: str) -> bool:
    which = which.upper().replace(",", "")
    if which == "S0":
        return 0 < gamma < n and n - gamma < sigma <= alpha * gamma
    if which == "S12":
        return 0 < gamma < n / 2 and n / 2 - gamma < sigma <= alpha * gamma
    if which == "S3":
        return n / 2 <= gamma < n and 0 < sigma <= alpha * gamma
    raise DomainError(f"unknown region {which!r}; expected S0, S12 or S3")


@dataclass
class AssumptionReport:
    epsilon: float
    nu: float
    params_i: bool
    params_ii: bool
    params_iii: bool
    params_ii_empty: bool
    params_iii_empty: bool
    lambda_positive: bool
    lambda_sector: bool
    lambda_sector_literal: bool
    root_arguments: tuple
    f_conditions: dict = field(default_factory=lambda: {"I": "caller-asserted",
                                                         "II": "caller-asserted",
                                                         "III": "caller-asserted"})

    @property
    def params_hold(self) -> bool:
        return self.params_i or self.params_ii or self.params_iii

    @property
    def lambda_holds(self) -> bool:
        return self.lambda_positive or self.lambda_sector

    def to_dict(self) -> dict:
        d = asdict(self)
        d["root_arguments"] = list(self.root_arguments)
        return d


def lambda_sector_check(alpha: float, lam: complex) -> tuple:
    """``(positive, sector_on_ml_argument, sector_literal)`` for one damping root.

    The sector condition is tested on ``|arg(-lam)|`` (the angle the
    Mittag-Leffler function actually sees) and, separately, literally on
    ``|arg(lam)|``; a suitable ``theta`` exists iff the angle exceeds
    ``pi alpha / 2``.
    """
    lam = complex(lam)
    lo, _ = _sector_window(alpha)
    positive = lam.imag == 0 and lam.real > 0
    return positive, sector_argument(lam) > lo, abs(np.angle(lam)) > lo


def check_assumptions(p: ModelParams, gamma: float, pq: tuple) -> AssumptionReport:
    """Evaluate the parameter and damping-root hypotheses of the Strichartz results.

    Conditions on the source term are reported as caller-asserted.
    """
    a, s, n = p.alpha, p.sigma, p.n
    eps = gamma - s / a
    nu = gamma - s / a * p.beta
    pp, qq = pq
    i = in_region_S(a, s, gamma, n, "S0") and pp == 1 and math.isinf(qq)
    ii = (in_region_S(a, s, gamma, n, "S12") and in_region_R12(pp, qq, s + eps, n)
          and in_region_R12(pp, qq, s + nu, n))
    iii = (in_region_S(a, s, gamma, n, "S3") and in_region_R3(pp, qq, eps, s + eps, n)
           and in_region_R3(pp, qq, nu, s + nu, n))
    ii_empty = region_R12_empty(s + eps, n) or region_R12_empty(s + nu, n)
    iii_empty = region_R3_empty(eps, s + eps, n) or region_R3_empty(nu, s + nu, n)
    rts = roots(p.mu)
    lams = [rts.lambda_plus] if rts.branch is Branch.CRITICAL else [rts.lambda_plus, rts.lambda_minus]
    checks = [lambda_sector_check(a, lam) for lam in lams]
    return AssumptionReport(
        epsilon=eps, nu=nu, params_i=i, params_ii=ii, params_iii=iii,
        params_ii_empty=ii_empty, params_iii_empty=iii_empty,
        lambda_positive=all(c[0] for c in checks),
        lambda_sector=all(c[1] for c in checks),
        lambda_sector_literal=all(c[2] for c in checks),
        root_arguments=tuple(float(np.angle(lam)) for lam in lams))


# ---------------------------------------------------------------------------
# Exponents
# ---------------------------------------------------------------------------

class Setting(str, enum.Enum):
    LP_LQ = "Lp_Lq"
    LP_WSQ = "Lp_Wsq"
    WG_LQ = "Wg_Lq"
    WG_WSQ = "Wg_Wsq"


@dataclass(frozen=True)
class ExponentClaim:
    """Predicted time exponent of a dispersive estimate."""

    setting: Setting
    alpha: float
    sigma: float
    n: int
    p: float
    q: float
    gamma: float = 0.0
    beta: float = 1.0
    lam: complex = 1.0

    @property
    def predicted_exponent(self) -> float:
        x, y = _ratios(self.p, self.q, self.n)
        base = -(self.alpha / self.sigma) * (x - y)
        if self.setting is Setting.LP_LQ:
            return base
        if self.setting is Setting.LP_WSQ:
            return -self.alpha + base
        g = (self.alpha / self.sigma) * self.gamma
        if self.setting is Setting.WG_LQ:
            return base + g
        return -self.alpha + base + g

    @property
    def claim_id(self) -> str:
        return (f"decay:{self.setting.value}:a={self.alpha:g}:s={self.sigma:g}:n={self.n}"
                f":p={self.p:g}:q={self.q:g}:g={self.gamma:g}")


def fit_decay_exponent(times, norms, window=None) -> float:
    """Least-squares slope of ``log norm`` against ``log t`` over ``window = (start, stop)`` indices."""
    times = np.asarray(times, dtype=float)
    norms = np.asarray(norms, dtype=float)
    if window is not None:
        sl = slice(*window)
        times, norms = times[sl], norms[sl]
    if times.size < 2:
        raise DomainError("need at least two samples to fit a slope")
    if np.any(times <= 0) or np.any(norms <= 0):
        raise DomainError("times and norms must be positive for a log-log fit")
    return float(np.polyfit(np.log(times), np.log(norms), 1)[0])


def strichartz_theta(p, q, gamma, sigma, alpha, n, problem: str) -> float:
    """``(alpha/sigma)(n/p - n/q - g)`` with ``g = gamma - sigma/alpha`` (cp1) or ``gamma`` (cp2)."""
    x, y = _ratios(p, q, n)
    problem = problem.lower()
    if problem == "cp1":
        g = gamma - sigma / alpha
    elif problem == "cp2":
        g = gamma
    else:
        raise DomainError(f"unknown problem {problem!r}")
    return alpha / sigma * (x - y - g)


@dataclass(frozen=True)
class SBound:
    """Supremum of admissible time exponents ``s``; ``unbounded`` when every ``s >= 1`` works."""

    value: float
    unbounded: bool

    def admits(self, s: float) -> bool:
        return s >= 1 and (self.unbounded or s < self.value)


def strichartz_s_bound(p, q, gamma, sigma, alpha, n, problem: str) -> SBound:
    theta = strichartz_theta(p, q, gamma, sigma, alpha, n, problem)
    if theta <= 0:
        return SBound(math.inf, True)
    return SBound(1 / theta, False)


def lambda_closed(theta: float) -> float:
    """``pi / sin(pi theta)`` for ``0 < theta < 1``."""
    if not 0 < theta < 1:
        raise DomainError(f"theta must lie in (0, 1), got {theta}")
    return math.pi / math.sin(math.pi * theta)


def lambda_quadrature(theta: float, t: float = 1.0) -> float:
    """``int_0^t (t - tau)^(-theta) tau^(theta-1) d tau`` with algebraic end-point weights."""
    if not 0 < theta < 1:
        raise DomainError(f"theta must lie in (0, 1), got {theta}")
    return integrate.quad(lambda x: 1.0, 0, t, weight="alg", wvar=(theta - 1, -theta),
                          epsabs=0, epsrel=1e-13)[0]


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

@dataclass
class EstimateReport:
    """One checked claim.

    ``comparison="abs"``: pass iff ``|measured - predicted| <= tolerance``.
    ``comparison="le"``: pass iff ``measured <= predicted + tolerance``.
    ``comparison="ge"``: pass iff ``measured >= predicted - tolerance``.
    """

    claim_id: str
    predicted: float
    measured: float
    tolerance: float
    comparison: str = "abs"
    artifacts: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        if not (np.isfinite(self.measured) and np.isfinite(self.predicted)):
            return False
        if self.comparison == "abs":
            return abs(self.measured - self.predicted) <= self.tolerance
        if self.comparison == "le":
            return self.measured <= self.predicted + self.tolerance
        if self.comparison == "ge":
            return self.measured >= self.predicted - self.tolerance
        raise DomainError(f"unknown comparison {self.comparison!r}")

    def to_dict(self) -> dict:
        return {"claim": self.claim_id, "predicted": self.predicted, "measured": self.measured,
                "tolerance": self.tolerance, "comparison": self.comparison,
                "pass": self.passed, "artifacts": list(self.artifacts),
                "details": self.details}


def write_reports(reports, json_path=None, csv_path=None) -> list:
    """Serialise reports sorted by claim id; returns the sorted list."""
    ordered = sorted(reports, key=lambda r: r.claim_id)
    if json_path is not None:
        Path(json_path).write_text(json.dumps(
            {"schema_version": SCHEMA_VERSION, "reports": [r.to_dict() for r in ordered]},
            indent=2, default=_json_default))
    if csv_path is not None:
        with Path(csv_path).open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["claim", "predicted", "measured", "tolerance", "comparison", "pass"])
            for r in ordered:
                w.writerow([r.claim_id, f"{r.predicted:.17g}", f"{r.measured:.17g}",
                            f"{r.tolerance:.17g}", r.comparison, int(r.passed)])
    return ordered


def _json_default(obj):
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    return str(obj)
