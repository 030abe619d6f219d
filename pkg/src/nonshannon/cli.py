"""Command-line interface: gen-cone, verify, project, derive, iterate, sequence."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .copy_lemma import Scenario
from .derivation import derive, iterate, write_report
from .entropy_space import EQ, dump_forms, dump_vectors, load_forms, load_vectors, parse_key
from .lp import ConeLP
from .projection import chm_project, fm_eliminate
from .sequence import seq_inequality, verify_seq_step
from .shannon import Cone, adjoin, shannon_cone


def _read_cone(path, n: int | None = None) -> Cone:
    forms = load_forms(Path(path).read_text())
    if not forms and n is None:
        raise SystemExit(f"{path}: empty cone file")
    n = max([f.n for f in forms] + [n or 0])
    return Cone.from_forms(n, forms)


def _write(text: str, path) -> None:
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def cmd_gen_cone(a) -> int:
    cone = shannon_cone(a.n)
    if a.adjoin:
        cone = adjoin(cone, load_forms(Path(a.adjoin).read_text()), substituted=a.substituted)
    _write(cone.dumps(), a.out)
    return 0


def cmd_verify(a) -> int:
    cone = _read_cone(a.cone)
    targets = load_forms(Path(a.target).read_text())
    lp = ConeLP(cone)
    certs, witnesses, ok = [], [], True
    for t in targets:
        res = lp.infer(t.lift(cone.n))
        if res.implied:
            print(f"implied      {t.pretty()}")
            certs.append(res.cert.to_record())
        else:
            ok = False
            print(f"not implied  {t.pretty()}")
            witnesses.append(res.witness)
    if a.emit_certificate and certs:
        text = json.dumps(certs[0], indent=1) if len(certs) == 1 else "".join(json.dumps(c) + "\n" for c in certs)
        Path(a.emit_certificate).write_text(text + ("\n" if len(certs) == 1 else ""))
    if a.emit_witness and witnesses:
        Path(a.emit_witness).write_text(dump_vectors(witnesses))
    return 0 if ok else 1


def cmd_project(a) -> int:
    cone = _read_cone(a.cone)
    keep = sorted({int(x) for x in a.keep_vars.split(",") if x.strip()})
    if a.method == "fm":
        if keep != list(range(1, len(keep) + 1)):
            raise SystemExit("fm projection keeps a prefix 1..m of the variables")
        kept = set(range(1, 1 << len(keep)))
        out = fm_eliminate(cone, [s for s in range(1, 1 << cone.n) if s not in kept])
        calls = None
    else:
        warm = load_vectors(Path(a.warm_start).read_text()) if a.warm_start else []
        proj = chm_project(cone, keep, warm_start=warm, max_steps=a.max_steps)
        out, calls = proj.cone, proj.lp_calls
        if a.rays and out.rays is not None:
            Path(a.rays).write_text(dump_vectors(out.rays))
    _write(out.dumps(), a.out)
    msg = f"{len(out.ineqs)} inequalities, {len(out.eqs)} equalities"
    print(msg + (f", {calls} LP calls" if calls is not None else ""), file=sys.stderr)
    return 0


def cmd_derive(a) -> int:
    s = Scenario.load(a.scenario)
    base = _read_cone(a.base, s.m) if a.base else None
    known = load_forms(Path(a.known).read_text()) if a.known else []
    cands = load_forms(Path(a.candidates).read_text()) if a.candidates else None
    der = derive(s, base, known, witnesses=a.witnesses, max_steps=a.max_steps, candidates=cands)
    write_report(der, a.report)
    print(json.dumps(der.summary(), indent=2))
    return 0


def cmd_iterate(a) -> int:
    s = Scenario.load(a.scenario)
    start = _read_cone(a.start, s.m) if a.start else None
    steps = iterate(s, a.steps, start)
    for k, st in enumerate(steps, 1):
        print(f"step {k}: projection {st.derivation.raw_count} facets, "
              f"{len(st.new_facets)} not implied by the previous bound "
              f"({len({f for f in st.new_facets})} raw, "
              f"{sum(1 for r in st.derivation.reports if r.classification == 'new')} classes), "
              f"bound {len(st.bound.ineqs)} inequalities")
        if a.out:
            d = Path(a.out) / f"step{k}"
            write_report(st.derivation, d)
            (d / "bound.jsonl").write_text(st.bound.dumps())
    return 0


def cmd_sequence(a) -> int:
    f = seq_inequality(a.s)
    print(f.pretty())
    if a.emit:
        Path(a.emit).write_text(dump_forms([f]))
    if a.verify:
        if a.s < 2:
            print("s = 1 is Shannon-type; induction steps start at s = 2")
        else:
            _, cert = verify_seq_step(a.s)
            print(f"certified from member {a.s - 1} with {len(cert.ineq_multipliers)} inequality and "
                  f"{len(cert.eq_multipliers)} equality multipliers")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nonshannon", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("gen-cone", help="emit the Shannon cone H_n")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--adjoin", help="inequality file to add")
    g.add_argument("--substituted", action="store_true", help="add all substituted forms")
    g.add_argument("--out", help="output file (default stdout)")
    g.set_defaults(fn=cmd_gen_cone)

    v = sub.add_parser("verify", help="decide whether targets are implied by a cone")
    v.add_argument("--cone", required=True)
    v.add_argument("--target", required=True)
    v.add_argument("--emit-certificate")
    v.add_argument("--emit-witness")
    v.set_defaults(fn=cmd_verify)

    pr = sub.add_parser("project", help="project a cone onto the entropy space of a variable subset")
    pr.add_argument("--cone", required=True)
    pr.add_argument("--keep-vars", required=True)
    pr.add_argument("--method", choices=["chm", "fm"], default="chm")
    pr.add_argument("--warm-start", help="rays file of points known to lie in the projection")
    pr.add_argument("--max-steps", type=int)
    pr.add_argument("--rays", help="write the extreme rays here (chm only)")
    pr.add_argument("--out")
    pr.set_defaults(fn=cmd_project)

    d = sub.add_parser("derive", help="project a copy scenario and classify its facets")
    d.add_argument("--scenario", required=True)
    d.add_argument("--base")
    d.add_argument("--known")
    d.add_argument("--report", required=True)
    d.add_argument("--witnesses", action="store_true", help="compute independence witnesses for new classes")
    d.add_argument("--max-steps", type=int)
    d.add_argument("--candidates", help="candidate inequalities for targeted mode")
    d.set_defaults(fn=cmd_derive)

    it = sub.add_parser("iterate", help="apply the outer-bound map k times")
    it.add_argument("--scenario", required=True)
    it.add_argument("--steps", type=int, required=True)
    it.add_argument("--start", help="starting bound (default Shannon cone)")
    it.add_argument("--out", help="directory for per-step reports")
    it.set_defaults(fn=cmd_iterate)

    sq = sub.add_parser("sequence", help="member s of the infinite inequality family")
    sq.add_argument("--s", type=int, required=True)
    sq.add_argument("--verify", action="store_true")
    sq.add_argument("--emit")
    sq.set_defaults(fn=cmd_sequence)
    return p


def main(argv=None) -> int:
    a = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if a.verbose else logging.WARNING, format="%(message)s")
    try:
        return a.fn(a)
    except (ValueError, OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
