"""Generate and certify members of the infinite four-variable family."""

from __future__ import annotations

from dataclasses import dataclass

from _common import Timer, parse_config, save_json
from nonshannon.sequence import seq_inequality, verify_seq_step


@dataclass
class Config:
    max_s: int = 6
    out: str = "results/sequence"


def main(cfg: Config) -> None:
    rows = []
    for s in range(1, cfg.max_s + 1):
        f = seq_inequality(s)
        row = {"s": s, "form": f.pretty(), "record": f.to_record()}
        if s >= 2:
            with Timer() as t:
                _, cert = verify_seq_step(s)
            row |= {"certified": True, "multipliers": len(cert.ineq_multipliers) + len(cert.eq_multipliers),
                    "seconds": round(t.seconds, 2)}
        rows.append(row)
        print(s, row.get("certified", "shannon"), f.pretty())
    save_json(f"{cfg.out}/summary.json", rows)


if __name__ == "__main__":
    main(parse_config(Config, __doc__))
