"""Sup-norm decay of the data-only solution; writes the norm series and fitted slopes."""

import math
from dataclasses import dataclass, field

from _common import parse

from sigmaevo.estimates import ExponentClaim, Setting
from sigmaevo.solver import export_norms
from sigmaevo.verify import DecayConfig, decay_scenario


@dataclass
class Config:
    scenarios: tuple = ((0.5, 2.0), (0.3, 2.0), (0.5, 1.5))     # (alpha, sigma)
    base: DecayConfig = field(default_factory=DecayConfig)


def main():
    cfg, out = parse(Config, __doc__)
    for alpha, sigma in cfg.scenarios:
        dc = DecayConfig(**{**cfg.base.__dict__, "alpha": alpha, "sigma": sigma})
        res = decay_scenario(dc)
        tag = f"a{alpha:g}_s{sigma:g}"
        export_norms(out / f"sup_{tag}.csv", res["times"], res["sup"])
        export_norms(out / f"sobolev_{tag}.csv", res["times"], res["sobolev"])
        claim = ExponentClaim(Setting.LP_LQ, alpha=alpha, sigma=sigma, n=dc.n, p=dc.r, q=math.inf)
        print(f"alpha={alpha:g} sigma={sigma:g}: slope {res['slope_sup']:.4f}, "
              f"predicted {claim.predicted_exponent:.4f}")


if __name__ == "__main__":
    main()
