"""Three copy steps (seven variables).

By default the three listed inequalities are certified directly against
the lifted cone (targeted mode).  With --full the whole projection is
computed; expect hours.
"""

from __future__ import annotations

from dataclasses import dataclass

from _common import Timer, parse_config, save_json
from nonshannon.derivation import ITERATE_2, SEVEN_VAR, THREE_COPY, ZHANG_YEUNG, derive, targeted, write_report


@dataclass
class Config:
    out: str = "results/seven_var"
    full: bool = False
    max_steps: int = 0  # 0 = unlimited


def main(cfg: Config) -> None:
    known = [ZHANG_YEUNG, ITERATE_2]
    with Timer() as t:
        if cfg.full:
            der = derive(THREE_COPY, known=known, witnesses=True, max_steps=cfg.max_steps or None,
                         candidates=list(SEVEN_VAR))
        else:
            der = targeted(THREE_COPY, None, list(SEVEN_VAR), known=known, witnesses=True)
    write_report(der, cfg.out)
    facets = set(der.projection.ineqs) if der.projection is not None else set()
    summary = der.summary() | {
        "seconds": round(t.seconds, 1),
        "listed_in_projection": [f in facets for f in SEVEN_VAR] if facets else None,
    }
    save_json(f"{cfg.out}/summary.json", summary)
    print(summary)


if __name__ == "__main__":
    main(parse_config(Config, __doc__))
