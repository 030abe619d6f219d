"""Shannon cones and outer bounds built on top of them."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .entropy_space import (
    EQ,
    GE,
    EntVector,
    LinForm,
    canonicalize,
    check_n,
    embeddings,
    evaluate,
)


@dataclass(frozen=True)
class Cone:
    """Polyhedral cone in R^{P(N)}: ``ineqs >= 0``, ``eqs = 0``, optional rays."""

    n: int
    ineqs: tuple[LinForm, ...] = ()
    eqs: tuple[LinForm, ...] = ()
    rays: tuple[EntVector, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "ineqs", tuple(self.ineqs))
        object.__setattr__(self, "eqs", tuple(self.eqs))
        if self.rays is not None:
            object.__setattr__(self, "rays", tuple(self.rays))
        for f in self.ineqs + self.eqs:
            if f.n != self.n:
                raise ValueError(f"constraint over {f.n} variables in a cone over {self.n}")

    @property
    def dim(self) -> int:
        """Number of coordinates (the empty set excluded)."""
        return (1 << self.n) - 1

    def contains(self, v: EntVector) -> bool:
        return all(evaluate(f, v) >= 0 for f in self.ineqs) and all(evaluate(f, v) == 0 for f in self.eqs)

    def check_rays(self) -> bool:
        """Double description consistency of the stored rays."""
        return self.rays is None or all(self.contains(r) for r in self.rays)

    def to_records(self) -> list[dict]:
        return [f.to_record() for f in self.ineqs + self.eqs]

    def dumps(self) -> str:
        return "".join(json.dumps(r) + "\n" for r in self.to_records())

    @classmethod
    def from_forms(cls, n: int, forms: Iterable[LinForm]) -> "Cone":
        ineqs, eqs = [], []
        for f in forms:
            f = f.lift(n) if f.n < n else f
            (eqs if f.relation == EQ else ineqs).append(f)
        return cls(n, tuple(ineqs), tuple(eqs))


def _entropy(n: int, terms: Sequence[tuple[int, int]]) -> LinForm:
    coeffs: dict[int, Fraction] = {}
    for mask, c in terms:
        if mask:
            coeffs[mask] = coeffs.get(mask, Fraction(0)) + c
    return canonicalize(LinForm.from_coeffs(n, coeffs, GE))


def elemental_inequalities(n: int) -> list[LinForm]:
    """H(i | N-i) >= 0 for each i, then I(i; j | K) >= 0 for i < j, K in N-{i,j}.

    There are n + C(n,2) 2^(n-2) of them.
    """
    check_n(n)
    full = (1 << n) - 1
    out = []
    for i in range(n):
        out.append(_entropy(n, [(full, 1), (full ^ (1 << i), -1)]))
    for i in range(n):
        for j in range(i + 1, n):
            a, b = 1 << i, 1 << j
            rest = full ^ a ^ b
            k = rest
            ks = []
            while True:
                ks.append(k)
                if k == 0:
                    break
                k = (k - 1) & rest
            for k in reversed(ks):
                out.append(_entropy(n, [(a | k, 1), (b | k, 1), (a | b | k, -1), (k, -1)]))
    return out


def shannon_cone(n: int) -> Cone:
    return Cone(n, tuple(elemental_inequalities(n)))


def polymatroid_inequalities(n: int) -> list[LinForm]:
    """Raw monotone + submodular description of H_N (for cross-checks)."""
    check_n(n)
    full = (1 << n) - 1
    out: dict[LinForm, None] = {}
    for i in range(1, full + 1):
        for j in range(0, full + 1):
            if j != i and j & i == j:
                out.setdefault(_entropy(n, [(i, 1), (j, -1)]))
    for i in range(1, full + 1):
        for j in range(i + 1, full + 1):
            if i & j not in (i, j):
                out.setdefault(_entropy(n, [(i, 1), (j, 1), (i | j, -1), (i & j, -1)]))
    return [f for f in out if not f.is_zero()]


def adjoin(cone: Cone, extra: Iterable[LinForm], substituted: bool = False) -> Cone:
    """Append inequalities to a cone, optionally with all their substituted forms.

    With ``substituted`` each m-variable form contributes its images under
    every substitution of variables by pairwise disjoint nonempty sets of
    variables of {1..n} (see ``embeddings``).  Duplicates (by canonical form)
    are dropped.  Any stored rays are discarded.
    """
    extra = list(extra)
    if not extra:
        return cone
    seen = {canonicalize(f) for f in cone.ineqs}
    new = list(cone.ineqs)
    for f in extra:
        if f.n > cone.n:
            raise ValueError(f"{f.n}-variable form does not fit in a cone over {cone.n} variables")
        if f.relation != GE:
            raise ValueError("adjoin takes inequalities only")
        forms = embeddings(f, cone.n) if substituted else [canonicalize(f.lift(cone.n))]
        for g in forms:
            if g not in seen and not g.is_zero():
                seen.add(g)
                new.append(g)
    return Cone(cone.n, tuple(new), cone.eqs)
