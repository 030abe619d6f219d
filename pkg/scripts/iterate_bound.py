"""Iterate the one-copy outer-bound map from the Shannon cone."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from _common import Timer, parse_config, save_json
from nonshannon.derivation import ITERATE_2, ONE_COPY, iterate, write_report


@dataclass
class Config:
    steps: int = 2
    out: str = "results/iterate"


def main(cfg: Config) -> None:
    with Timer() as t:
        steps = iterate(ONE_COPY, cfg.steps)
    rows = []
    for k, st in enumerate(steps, 1):
        d = Path(cfg.out) / f"step{k}"
        write_report(st.derivation, d)
        (d / "bound.jsonl").write_text(st.bound.dumps())
        rows.append({
            "step": k,
            "projection_facets": st.derivation.raw_count,
            "not_implied_raw": len(st.new_facets),
            "not_implied_classes": st.derivation.count("new"),
            "bound_inequalities": len(st.bound.ineqs),
            "contains_iterate_2": ITERATE_2 in set(st.derivation.projection.ineqs),
        })
        print(rows[-1])
    save_json(f"{cfg.out}/summary.json", {"steps": rows, "seconds": round(t.seconds, 1)})


if __name__ == "__main__":
    main(parse_config(Config, __doc__))
