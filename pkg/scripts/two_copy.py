"""Two copy steps (six variables): the 35-facet projection."""

from __future__ import annotations

from dataclasses import dataclass

from _common import Timer, parse_config, save_json
from nonshannon.derivation import TWO_COPY, ZHANG_YEUNG, derive, write_report


@dataclass
class Config:
    out: str = "results/two_copy"
    witnesses: bool = True


def main(cfg: Config) -> None:
    with Timer() as t:
        der = derive(TWO_COPY, known=[ZHANG_YEUNG], witnesses=cfg.witnesses)
    write_report(der, cfg.out)
    summary = der.summary() | {"seconds": round(t.seconds, 1), "equalities": len(der.cone.eqs)}
    save_json(f"{cfg.out}/summary.json", summary)
    for r in der.reports:
        print(f"{r.classification:8s} x{r.members:<3d} {r.facet.pretty()}")
    print(summary)


if __name__ == "__main__":
    main(parse_config(Config, __doc__))
