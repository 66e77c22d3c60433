"""Retarded-term ratios and mixed-norm prefactors across time horizons."""

import json
from dataclasses import dataclass, field

from _common import parse

from sigmaevo.verify import MixedNormConfig, RetardedConfig, mixed_norm_study, retarded_study


@dataclass
class Config:
    retarded: RetardedConfig = field(default_factory=RetardedConfig)
    mixed: MixedNormConfig = field(default_factory=MixedNormConfig)


def main():
    cfg, out = parse(Config, __doc__)
    rs = retarded_study(cfg.retarded)
    ms = mixed_norm_study(cfg.mixed)
    summary = {
        "retarded": {"theta": rs["theta"], "horizons": list(cfg.retarded.horizons),
                     "ratios": rs["ratios"]},
        "mixed": {"s_bound": ms["bound"].value, "theta": ms["theta"],
                  "horizons": list(cfg.mixed.horizons),
                  "prefactors": {str(k): v for k, v in ms["prefactors"].items()}},
    }
    (out / "strichartz.json").write_text(json.dumps(summary, indent=2))
    print(json.dumps(summary, indent=2))


if __name__ == "__main__":
    main()
