"""Copy-lemma equality systems and the scenario cones built from them.

A copy step adds a variable ``new`` that is a J-copy of variable k over I:
(new, I) has the joint law of (k, I) and (k, J) -> I -> new is a Markov
chain.  Its entropy consequences are two linear equality families.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .entropy_space import (
    EQ,
    GE,
    LinForm,
    canonicalize,
    embeddings,
    load_forms,
    mask_vars,
    subset_mask,
    subsets,
)
from .shannon import Cone, elemental_inequalities


@dataclass(frozen=True)
class CopyStep:
    k: int
    I: int  # bitmask
    J: int  # bitmask
    new: int

    def __post_init__(self):
        kbit = 1 << (self.k - 1)
        if self.k < 1 or self.new < 2:
            raise ValueError("variable indices start at 1")
        if kbit & self.I or kbit & self.J or self.I & self.J:
            raise ValueError(f"{{k}}, I, J must be pairwise disjoint in {self}")
        if (kbit | self.I | self.J) >> (self.new - 1):
            raise ValueError(f"copy parameters must reference variables below {self.new}")

    @classmethod
    def of(cls, k: int, I: Iterable[int], J: Iterable[int], new: int) -> "CopyStep":
        return cls(k, subset_mask(I), subset_mask(J), new)

    def describe(self) -> str:
        fmt = lambda m: "{" + ",".join(map(str, mask_vars(m))) + "}"
        return f"x{self.new} = {fmt(self.J)}-copy of x{self.k} over {fmt(self.I)}"


def copy_equalities(step: CopyStep) -> list[LinForm]:
    """Entropy equalities implied by one copy step, over ``step.new`` variables.

    2^|I| marginal equalities H(new, I1) = H(k, I1) for I1 in I (I1 empty
    included), then 2^(|J|+1) - 1 Markov equalities for nonempty J1 in {k} u J.
    """
    n = step.new
    nb = 1 << (n - 1)
    kb = 1 << (step.k - 1)
    out = []

    def eq(pairs):
        coeffs: dict[int, Fraction] = {}
        for mask, c in pairs:
            if mask:
                coeffs[mask] = coeffs.get(mask, Fraction(0)) + c
        return canonicalize(LinForm.from_coeffs(n, coeffs, EQ))

    for i1 in subsets(step.I):
        out.append(eq([(nb | i1, 1), (kb | i1, -1)]))
    I = step.I
    for j1 in subsets(kb | step.J):
        if j1:
            out.append(eq([(nb | I, 1), (I | j1, 1), (nb | I | j1, -1), (I, -1)]))
    return out


@dataclass(frozen=True)
class Scenario:
    """Base dimension m, a sequence of copy steps, optional extra constraints.

    ``base_bound`` holds extra m-variable inequalities (e.g. known
    non-Shannon ones) added to the lifted cone, through all variable
    substitutions when ``substituted`` is set.  ``extra_eqs`` are
    user-supplied equalities over the full n variables.
    """

    m: int
    steps: tuple[CopyStep, ...] = ()
    base_bound: tuple[LinForm, ...] = ()
    substituted: bool = True
    extra_eqs: tuple[LinForm, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        object.__setattr__(self, "base_bound", tuple(self.base_bound))
        object.__setattr__(self, "extra_eqs", tuple(self.extra_eqs))
        for t, st in enumerate(self.steps):
            if st.new != self.m + t + 1:
                raise ValueError(f"step {t} must introduce variable {self.m + t + 1}, got {st.new}")
        for f in self.base_bound:
            if f.n > self.m:
                raise ValueError("base bound form has more than m variables")
        for f in self.extra_eqs:
            if f.n > self.n:
                raise ValueError("extra equality references a variable beyond n")

    @property
    def n(self) -> int:
        return self.m + len(self.steps)

    @classmethod
    def build(cls, m: int, steps: Sequence[tuple], **kw) -> "Scenario":
        """``steps`` as ``(k, I, J)`` triples; new indices are implicit."""
        return cls(m, tuple(CopyStep.of(k, I, J, m + t + 1) for t, (k, I, J) in enumerate(steps)), **kw)

    def equalities(self) -> list[LinForm]:
        out: dict[LinForm, None] = {}
        for st in self.steps:
            for f in copy_equalities(st):
                out.setdefault(canonicalize(f.lift(self.n)))
        for f in self.extra_eqs:
            out.setdefault(canonicalize(f.lift(self.n).with_relation(EQ)))
        return list(out)

    def to_record(self) -> dict:
        rec = {
            "m": self.m,
            "steps": [{"k": s.k, "I": list(mask_vars(s.I)), "J": list(mask_vars(s.J))} for s in self.steps],
            "substituted": self.substituted,
        }
        return rec

    @classmethod
    def from_record(cls, rec: dict, root: Path | None = None) -> "Scenario":
        m = int(rec["m"])
        steps = [(int(s["k"]), s.get("I", []), s.get("J", [])) for s in rec.get("steps", [])]
        base: list[LinForm] = []
        root = root or Path(".")
        if rec.get("base_bound"):
            base = load_forms((root / rec["base_bound"]).read_text())
        extra: list[LinForm] = []
        if rec.get("extra_eqs"):
            extra = mmrv_equalities((root / rec["extra_eqs"]).read_text())
        return cls.build(m, steps, base_bound=tuple(base), substituted=bool(rec.get("substituted", True)),
                         extra_eqs=tuple(extra))

    @classmethod
    def load(cls, path) -> "Scenario":
        path = Path(path)
        return cls.from_record(json.loads(path.read_text()), path.parent)


def _non_shannon(forms: Iterable[LinForm], m: int) -> list[LinForm]:
    from .lp import infer
    from .shannon import shannon_cone

    h = shannon_cone(m)
    elem = set(h.ineqs)
    out = []
    for f in forms:
        f = canonicalize(f.lift(m))
        if f in elem or f.is_zero():
            continue
        if not infer(h, f).implied:
            out.append(f)
    return out


def scenario_cone(s: Scenario, base: Cone | None = None) -> Cone:
    """H_n^outer intersected with the copy equalities C_n.

    The inequalities are the elemental ones on n = m + |steps| variables
    followed by every substituted form of the non-Shannon inequalities of
    ``base`` and of ``s.base_bound``.  Shannon-type base inequalities are
    skipped: all their embeddings are implied by the n-variable elementals.
    """
    if base is not None and base.n != s.m:
        raise ValueError(f"base cone is over {base.n} variables, scenario expects {s.m}")
    n = s.n
    ineqs = list(elemental_inequalities(n))
    seen = set(ineqs)
    extra = []
    if base is not None:
        extra += [(f, True) for f in _non_shannon(base.ineqs, s.m)]
    extra += [(f, s.substituted) for f in _non_shannon(s.base_bound, s.m)]
    for f, sub in extra:
        for g in embeddings(f, n) if sub else [canonicalize(f.lift(n))]:
            if g not in seen:
                seen.add(g)
                ineqs.append(g)
    eqs = s.equalities()
    if base is not None:
        for f in base.eqs:
            for g in embeddings(f, n):
                if g not in eqs:
                    eqs.append(g)
    return Cone(n, tuple(ineqs), tuple(eqs))


def mmrv_equalities(script: str) -> list[LinForm]:
    """Parse a user equality script (inequality file format, ``"rel": "eq"``)."""
    forms = load_forms(script)
    out = []
    for f in forms:
        out.append(canonicalize(f.with_relation(EQ)))
    return out


def inference_rule_equalities() -> list[LinForm]:
    """Equalities x_{345} + x_{34 u J} - x_{345 u J} - x_{34} = 0, J in {1,2} nonempty.

    An inference-rule constraint on five variables, usable as a user C_N.
    """
    out = []
    for J in ([1], [2], [1, 2]):
        out.append(canonicalize(LinForm.from_sets(5, {
            (3, 4, 5): 1, tuple([3, 4] + J): 1, tuple([3, 4, 5] + J): -1, (3, 4): -1,
        }, EQ)))
    return out
