"""One copy step over four variables: the projection reveals only ZY."""

from __future__ import annotations

from dataclasses import dataclass

from _common import Timer, parse_config, save_json
from nonshannon.derivation import ONE_COPY, ZHANG_YEUNG, derive, write_report
from nonshannon.entropy_space import orbit_canonical


@dataclass
class Config:
    out: str = "results/zhang_yeung"
    witnesses: bool = False


def main(cfg: Config) -> None:
    with Timer() as t:
        der = derive(ONE_COPY, witnesses=cfg.witnesses)
    write_report(der, cfg.out)
    new = [r.facet for r in der.reports if r.classification == "new"]
    summary = der.summary() | {
        "seconds": round(t.seconds, 1),
        "only_zy": [orbit_canonical(f) for f in new] == [orbit_canonical(ZHANG_YEUNG)],
    }
    save_json(f"{cfg.out}/summary.json", summary)
    print(summary)


if __name__ == "__main__":
    main(parse_config(Config, __doc__))
