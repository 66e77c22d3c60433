"""Tabulate the three time-domain symbols on a (t, xi) grid for each damping branch."""

from dataclasses import dataclass

import numpy as np
from _common import parse

from sigmaevo.spectral import ModelParams, SymbolProfile, roots


@dataclass
class Config:
    alpha: float = 0.5
    beta: float = 1.0
    sigma: float = 2.0
    mus: tuple = (0.5, 2.0, 4.0)
    t_max: float = 10.0
    t_count: int = 50
    xi_max: float = 4.0
    xi_count: int = 40


def main():
    cfg, out = parse(Config, __doc__)
    ts = np.linspace(cfg.t_max / cfg.t_count, cfg.t_max, cfg.t_count)
    xs = np.linspace(0.0, cfg.xi_max, cfg.xi_count)
    for mu in cfg.mus:
        p = ModelParams(cfg.alpha, cfg.beta, cfg.sigma, mu)
        for kind in ("N", "M", "J"):
            prof = SymbolProfile.tabulate(kind, ts, xs, p)
            rows = np.column_stack([np.repeat(ts, xs.size), np.tile(xs, ts.size),
                                    prof.values.ravel()])
            path = out / f"{kind}_mu{mu:g}.csv"
            np.savetxt(path, rows, delimiter=",", header="t,xi,value", comments="", fmt="%.17g")
        print(f"mu={mu:g} ({roots(mu).branch.name.lower()}) written")


if __name__ == "__main__":
    main()
