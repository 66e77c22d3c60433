"""Small helpers shared by the experiment scripts."""

import argparse
import json
from dataclasses import asdict, fields, is_dataclass
from pathlib import Path


def parse(cfg_cls, description):
    """Return a config built from defaults plus ``--config`` JSON overrides, and the output dir."""
    ap = argparse.ArgumentParser(description=description)
    ap.add_argument("--config", help="JSON file overriding the dataclass defaults")
    ap.add_argument("--out", default=None, help="output directory")
    args = ap.parse_args()
    cfg = cfg_cls()
    if args.config:
        override(cfg, json.loads(Path(args.config).read_text()))
    out = Path(args.out or f"out-{cfg_cls.__name__.lower()}")
    out.mkdir(parents=True, exist_ok=True)
    (out / "config.json").write_text(json.dumps(asdict(cfg), indent=2))
    return cfg, out


def override(cfg, data):
    names = {f.name for f in fields(cfg)}
    for k, v in data.items():
        if k not in names:
            raise SystemExit(f"unknown key {k!r} for {type(cfg).__name__}")
        cur = getattr(cfg, k)
        if is_dataclass(cur):
            override(cur, v)
        else:
            setattr(cfg, k, tuple(v) if isinstance(v, list) else v)
    return cfg
