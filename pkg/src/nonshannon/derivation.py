"""Deriving inequalities by lifting, constraining with copy equalities and projecting.

The pipeline: build the scenario cone, project it back onto the original
variables with CHM, group the facets into permutation classes and classify
each class as Shannon-type, implied by a supplied list of known
inequalities, or new.  Every facet carries the certificate proving it from
the scenario cone.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .copy_lemma import Scenario, scenario_cone
from .entropy_space import EntVector, LinForm, canonicalize, dump_forms, orbit, orbit_canonical
from .lp import Certificate, ConeLP, infer
from .projection import Projection, StepBudgetExceeded, chm_project, remove_redundant
from .shannon import Cone, adjoin, shannon_cone

log = logging.getLogger(__name__)

SHANNON, KNOWN, NEW = "shannon", "known", "new"


def _form(coeffs: dict) -> LinForm:
    return canonicalize(LinForm.from_sets(4, coeffs))


ZHANG_YEUNG = _form({
    (1,): -2, (2,): -2, (3,): -1, (1, 2): 3, (1, 3): 3, (2, 3): 3,
    (1, 4): 1, (2, 4): 1, (3, 4): -1, (1, 2, 3): -4, (1, 2, 4): -1,
})

# second iterate of the single-copy bound
ITERATE_2 = _form({
    (1,): -10, (2,): -10, (3,): -1, (1, 2): 17, (1, 3): 10, (2, 3): 10,
    (1, 4): 4, (2, 4): 4, (3, 4): -3, (1, 2, 3): -16, (1, 2, 4): -5,
})

# three facets of the three-copy (7-variable) projection
SEVEN_VAR = (
    _form({(1,): -56, (2,): -4, (3,): -19, (1, 2): 45, (1, 3): 67, (2, 3): 22,
           (1, 4): 23, (2, 4): -8, (3, 4): 9, (1, 2, 3): -55, (1, 3, 4): -24}),
    _form({(1,): -34, (2,): -2, (3,): -11, (4,): -1, (1, 2): 27, (1, 3): 40, (2, 3): 12,
           (1, 4): 15, (2, 4): -5, (3, 4): 7, (1, 2, 3): -32, (1, 3, 4): -16}),
    _form({(1,): -28, (2,): -1, (3,): -10, (4,): -2, (1, 2): 22, (1, 3): 34, (2, 3): 11,
           (1, 4): 13, (2, 4): -4, (3, 4): 6, (1, 2, 3): -28, (1, 3, 4): -13}),
)

# copy scenarios over four variables
ONE_COPY = Scenario.build(4, [(3, [1, 2], [4])])
TWO_COPY = Scenario.build(4, [(3, [1, 2], [4]), (3, [1, 4, 5], [2])])
THREE_COPY = Scenario.build(4, [(3, [1, 2], [4]), (3, [1, 4, 5], [2]), (2, [1, 3, 5, 6], [4])])


@dataclass
class FacetReport:
    facet: LinForm
    classification: str
    proof: Certificate | None
    independence_witness: EntVector | None = None
    orbit_size: int = 1  # size of the full permutation orbit
    members: int = 1  # raw facets of the projection in this orbit

    def to_record(self) -> dict:
        rec = {
            "facet": self.facet.to_record(),
            "pretty": self.facet.pretty(),
            "classification": self.classification,
            "orbit_size": self.orbit_size,
            "members": self.members,
        }
        if self.independence_witness is not None:
            rec["independence_witness"] = self.independence_witness.to_record()
        return rec


@dataclass
class Derivation:
    scenario: Scenario
    cone: Cone  # the lifted scenario cone
    projection: Cone | None  # None in targeted mode
    reports: list[FacetReport]
    targeted: bool = False
    lp_calls: int = 0
    certificates: dict = field(default_factory=dict)  # raw facet -> proof from ``cone``

    @property
    def raw_count(self) -> int:
        return len(self.projection.ineqs) if self.projection is not None else len(self.reports)

    def count(self, classification: str) -> int:
        return sum(1 for r in self.reports if r.classification == classification)

    def summary(self) -> dict:
        return {
            "m": self.scenario.m,
            "n": self.scenario.n,
            "scenario": self.scenario.to_record(),
            "targeted": self.targeted,
            "raw_facets": self.raw_count,
            "orbit_classes": len(self.reports),
            "shannon_classes": self.count(SHANNON),
            "known_classes": self.count(KNOWN),
            "new_classes": self.count(NEW),
            "new_raw_facets": sum(r.members for r in self.reports if r.classification == NEW),
            "lp_calls": self.lp_calls,
        }


def context_cone(m: int, forms: Iterable[LinForm]) -> Cone:
    """Shannon cone on m variables plus all substituted forms of ``forms``."""
    return adjoin(shannon_cone(m), [f for f in forms if f.n <= m], substituted=True)


def independence_check(candidate: LinForm, context: Sequence[LinForm], m: int | None = None) -> EntVector | None:
    """A point of Shannon + substituted ``context`` violating ``candidate``, if any.

    Rows identical to the candidate itself are left out of the comparison
    set, so a facet-defining elemental inequality is independent of the
    remaining ones.
    """
    m = candidate.n if m is None else m
    target = canonicalize(candidate.lift(m))
    full = context_cone(m, context)
    cone = Cone(m, tuple(f for f in full.ineqs if f != target), full.eqs)
    res = infer(cone, target)
    return None if res.implied else res.witness


def classify(forms: Sequence[LinForm], m: int, known: Sequence[LinForm] = ()) -> list[str]:
    shannon = ConeLP(shannon_cone(m))
    known_lp = ConeLP(context_cone(m, known)) if known else None
    out = []
    for f in forms:
        if shannon.infer(f).implied:
            out.append(SHANNON)
        elif known_lp is not None and known_lp.infer(f).implied:
            out.append(KNOWN)
        else:
            out.append(NEW)
    return out


def _group(facets: Sequence[LinForm]) -> list[tuple[LinForm, int, int]]:
    """(representative, orbit size, members) in first-seen order."""
    groups: dict[LinForm, list] = {}
    for f in facets:
        key = orbit_canonical(f)
        if key in groups:
            groups[key][2] += 1
        else:
            groups[key] = [f, len(orbit(f)), 1]
    return [tuple(g) for g in groups.values()]


def _reports(facets, certs, m, known, witnesses: bool) -> list[FacetReport]:
    groups = _group(facets)
    reps = [g[0] for g in groups]
    labels = classify(reps, m, known)
    reports = [FacetReport(f, lab, certs.get(f), None, size, members)
               for (f, size, members), lab in zip(groups, labels)]
    if witnesses:
        new = [r.facet for r in reports if r.classification == NEW]
        for r in reports:
            if r.classification == NEW:
                others = [g for g in new if g is not r.facet]
                r.independence_witness = independence_check(r.facet, list(known) + others, m)
    return reports


def derive(s: Scenario, base: Cone | None = None, known: Sequence[LinForm] = (), witnesses: bool = False,
           max_steps: int | None = None, candidates: Sequence[LinForm] | None = None,
           warm_start: Iterable[EntVector] = ()) -> Derivation:
    """Project the scenario cone onto P({1..m}) and classify its facets.

    If ``max_steps`` LP calls do not suffice and ``candidates`` are given,
    fall back to targeted mode: each candidate is checked by inference
    against the scenario cone and reported if implied.
    """
    base = shannon_cone(s.m) if base is None else base
    cone = scenario_cone(s, base)
    try:
        proj: Projection = chm_project(cone, s.m, warm_start=warm_start, max_steps=max_steps)
    except StepBudgetExceeded:
        if candidates is None:
            raise
        log.info("projection budget exhausted; verifying %d candidates", len(candidates))
        return targeted(s, base, candidates, known, witnesses)
    reports = _reports(list(proj.cone.ineqs), proj.certificates, s.m, known, witnesses)
    return Derivation(s, cone, proj.cone, reports, lp_calls=proj.lp_calls, certificates=proj.certificates)


def targeted(s: Scenario, base: Cone | None, candidates: Sequence[LinForm], known: Sequence[LinForm] = (),
             witnesses: bool = False) -> Derivation:
    """Check candidate inequalities against the scenario cone without projecting."""
    base = shannon_cone(s.m) if base is None else base
    cone = scenario_cone(s, base)
    lp = ConeLP(cone)
    certs = {}
    proven = []
    for f in candidates:
        f = canonicalize(f)
        res = lp.infer(f.lift(cone.n))
        if not res.implied:
            raise ValueError(f"candidate is not implied by the scenario cone: {f.pretty()}")
        certs[f] = res.cert
        proven.append(f)
    reports = _reports(proven, certs, s.m, known, witnesses)
    return Derivation(s, cone, None, reports, targeted=True, lp_calls=len(candidates), certificates=certs)


@dataclass
class SigmaStep:
    bound: Cone  # the new outer bound
    derivation: Derivation  # projection of the lifted previous bound
    new_facets: list[LinForm] = field(default_factory=list)  # raw facets not implied by the previous bound


def sigma_step(bound: Cone, s: Scenario, witnesses: bool = False) -> SigmaStep:
    """One application of the outer-bound map.

    The previous bound is lifted through all substitutions, cut by the copy
    equalities and projected.  The projection is intersected with the
    previous bound over every relabelling of the variables (the scenario is
    applied up to symmetry), and redundant inequalities are removed.
    """
    if bound.n != s.m:
        raise ValueError("bound and scenario dimensions differ")
    der = derive(s, bound, known=[f for f in bound.ineqs], witnesses=witnesses)
    lp = ConeLP(bound)
    new = [f for f in der.projection.ineqs if not lp.infer(f).implied]
    reps = [g[0] for g in _group(new)]
    grown = adjoin(bound, reps, substituted=True)
    ineqs = remove_redundant(list(grown.ineqs), list(bound.eqs))
    ineqs = sorted(ineqs, key=lambda f: (f not in set(shannon_cone(s.m).ineqs), f.dense()))
    return SigmaStep(Cone(s.m, tuple(ineqs), bound.eqs), der, new)


def iterate(s: Scenario, steps: int, start: Cone | None = None) -> list[SigmaStep]:
    bound = shannon_cone(s.m) if start is None else start
    out = []
    for k in range(steps):
        st = sigma_step(bound, s)
        log.info("sigma step %d: projection %d facets, %d new, bound %d inequalities",
                 k + 1, st.derivation.raw_count, len(st.new_facets), len(st.bound.ineqs))
        out.append(st)
        bound = st.bound
    return out


def write_report(der: Derivation, out) -> Path:
    """Write a derivation to a report directory.

    cone.jsonl: the scenario cone (certificate indices refer to it, ineqs
    then eqs); facets.jsonl: raw projection facets; classes.jsonl: one
    record per facet class; certificates.jsonl: {facet, certificate} per raw
    facet; witnesses.jsonl: independence witnesses of new classes;
    summary.json: counts.
    """
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "cone.jsonl").write_text(der.cone.dumps())
    facets = list(der.projection.ineqs) if der.projection is not None else [r.facet for r in der.reports]
    (out / "facets.jsonl").write_text(dump_forms(facets))
    if der.projection is not None and der.projection.eqs:
        (out / "equalities.jsonl").write_text(dump_forms(der.projection.eqs))
    (out / "classes.jsonl").write_text("".join(json.dumps(r.to_record()) + "\n" for r in der.reports))
    (out / "certificates.jsonl").write_text("".join(
        json.dumps({"facet": f.to_record(), "certificate": der.certificates[f].to_record()}) + "\n"
        for f in facets if f in der.certificates))
    (out / "witnesses.jsonl").write_text("".join(
        json.dumps({"facet": r.facet.to_record(), "witness": r.independence_witness.to_record()}) + "\n"
        for r in der.reports if r.independence_witness is not None))
    (out / "summary.json").write_text(json.dumps(der.summary(), indent=2) + "\n")
    return out
