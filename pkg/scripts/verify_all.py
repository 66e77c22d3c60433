"""Run every verification suite and write report.json / report.csv."""

from dataclasses import dataclass, field

from _common import parse

from sigmaevo.estimates import write_reports
from sigmaevo.verify import SuiteConfig, run_suites


@dataclass
class Config:
    suites: tuple = ("all",)
    suite: SuiteConfig = field(default_factory=SuiteConfig)


def main():
    cfg, out = parse(Config, __doc__)
    reports = write_reports(run_suites(list(cfg.suites), cfg.suite),
                            out / "report.json", out / "report.csv")
    failed = [r.claim_id for r in reports if not r.passed]
    print(f"{len(reports) - len(failed)}/{len(reports)} checks passed")
    for cid in failed:
        print("FAIL", cid)
    raise SystemExit(1 if failed else 0)


if __name__ == "__main__":
    main()
