"""Coordinates of the entropy space R^{P(N)} and linear functionals on it.

A subset I of the ground set {1..n} is encoded as an integer bitmask: bit
i-1 is set iff variable i belongs to I.  The coordinate of the empty set is
identically zero and never stored.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

MAX_VARS = 16

GE = "ge"
EQ = "eq"


def check_n(n: int) -> int:
    if not 1 <= n <= MAX_VARS:
        raise ValueError(f"ground-set size must be in 1..{MAX_VARS}, got {n}")
    return n


def subset_mask(variables: Iterable[int]) -> int:
    """Bitmask of a collection of 1-based variable indices."""
    mask = 0
    for v in variables:
        if v < 1:
            raise ValueError(f"variable index must be >= 1, got {v}")
        mask |= 1 << (v - 1)
    return mask


def mask_vars(mask: int) -> tuple[int, ...]:
    """Sorted 1-based variables of a bitmask."""
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def subsets(mask: int) -> list[int]:
    """All submasks of ``mask`` (including 0 and ``mask``), ascending."""
    out = []
    sub = mask
    while True:
        out.append(sub)
        if sub == 0:
            break
        sub = (sub - 1) & mask
    out.reverse()
    return out


def coordinates(n: int) -> range:
    """Nonempty subsets of {1..n} in ascending bitmask order."""
    return range(1, 1 << n)


def format_key(mask: int) -> str:
    return ",".join(str(v) for v in mask_vars(mask))


def parse_key(key: str) -> int:
    key = key.strip()
    if not key:
        return 0
    return subset_mask(int(tok) for tok in key.split(","))


def to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value.strip())
    return Fraction(value)


def format_fraction(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def _normalize_terms(n: int, coeffs: Mapping[int, object]) -> tuple[tuple[int, Fraction], ...]:
    full = (1 << n) - 1
    terms = []
    for mask, c in coeffs.items():
        c = to_fraction(c)
        if mask & ~full:
            raise ValueError(f"subset {mask_vars(mask)} exceeds ground set of size {n}")
        if mask == 0:
            if c != 0:
                raise ValueError("the empty-set coordinate must have coefficient 0")
            continue
        if c != 0:
            terms.append((mask, c))
    terms.sort()
    return tuple(terms)


@dataclass(frozen=True)
class LinForm:
    """A rational linear functional on R^{P(N)} with relation ``>= 0`` or ``= 0``.

    ``terms`` holds the nonzero coefficients sorted by bitmask.  Build
    instances through :meth:`from_coeffs` to get validation.
    """

    n: int
    terms: tuple[tuple[int, Fraction], ...]
    relation: str = GE

    @classmethod
    def from_coeffs(cls, n: int, coeffs: Mapping[int, object], relation: str = GE) -> "LinForm":
        check_n(n)
        if relation not in (GE, EQ):
            raise ValueError(f"unknown relation {relation!r}")
        return cls(n, _normalize_terms(n, coeffs), relation)

    @classmethod
    def from_sets(cls, n: int, coeffs: Mapping[Sequence[int], object], relation: str = GE) -> "LinForm":
        """Build from ``{(1, 3): 2, (2,): -1, ...}`` style keys."""
        merged: dict[int, Fraction] = {}
        for key, c in coeffs.items():
            mask = subset_mask(key)
            merged[mask] = merged.get(mask, Fraction(0)) + to_fraction(c)
        return cls.from_coeffs(n, merged, relation)

    @classmethod
    def zero(cls, n: int, relation: str = GE) -> "LinForm":
        return cls.from_coeffs(n, {}, relation)

    @property
    def coeffs(self) -> dict[int, Fraction]:
        return dict(self.terms)

    def __getitem__(self, mask: int) -> Fraction:
        for m, c in self.terms:
            if m == mask:
                return c
        return Fraction(0)

    def is_zero(self) -> bool:
        return not self.terms

    def support(self) -> int:
        """Union of all subsets with a nonzero coefficient."""
        out = 0
        for m, _ in self.terms:
            out |= m
        return out

    def dense(self) -> list[Fraction]:
        """Coefficient vector over the nonempty coordinates (index = mask - 1)."""
        vec = [Fraction(0)] * ((1 << self.n) - 1)
        for m, c in self.terms:
            vec[m - 1] = c
        return vec

    def negate(self) -> "LinForm":
        return LinForm(self.n, tuple((m, -c) for m, c in self.terms), self.relation)

    def with_relation(self, relation: str) -> "LinForm":
        return LinForm.from_coeffs(self.n, self.coeffs, relation)

    def lift(self, n: int) -> "LinForm":
        """The same functional viewed on a larger ground set."""
        if n < self.n:
            raise ValueError(f"cannot lift a {self.n}-variable form to {n} variables")
        return LinForm(check_n(n), self.terms, self.relation)

    def __add__(self, other: "LinForm") -> "LinForm":
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        c = self.coeffs
        for m, v in other.terms:
            c[m] = c.get(m, Fraction(0)) + v
        return LinForm.from_coeffs(self.n, c, self.relation)

    def scale(self, k) -> "LinForm":
        k = to_fraction(k)
        return LinForm.from_coeffs(self.n, {m: k * c for m, c in self.terms}, self.relation)

    def pretty(self) -> str:
        """Human readable ``3H(1,2) - 2H(1) ... >= 0``."""
        if not self.terms:
            body = "0"
        else:
            parts = []
            for m, c in self.terms:
                sign = "-" if c < 0 else "+"
                a = abs(c)
                coef = "" if a == 1 else format_fraction(a)
                parts.append(f"{sign} {coef}H({format_key(m)})")
            body = " ".join(parts)
            body = body[2:] if body.startswith("+ ") else "-" + body[2:]
        return f"{body} {'>=' if self.relation == GE else '='} 0"

    def to_record(self) -> dict:
        return {
            "n": self.n,
            "rel": self.relation,
            "coeffs": {format_key(m): format_fraction(c) for m, c in self.terms},
        }

    @classmethod
    def from_record(cls, rec: Mapping) -> "LinForm":
        n = int(rec["n"])
        coeffs: dict[int, Fraction] = {}
        for key, val in rec.get("coeffs", {}).items():
            mask = parse_key(key)
            if mask >> n:
                raise ValueError(f"key {key!r} refers to a variable > {n}")
            coeffs[mask] = coeffs.get(mask, Fraction(0)) + to_fraction(val)
        return cls.from_coeffs(n, coeffs, rec.get("rel", GE))


@dataclass(frozen=True)
class EntVector:
    """A point of R^{P(N)}; the empty-set coordinate is always 0."""

    n: int
    values: tuple[tuple[int, Fraction], ...] = field(default=())

    @classmethod
    def from_values(cls, n: int, values: Mapping[int, object]) -> "EntVector":
        check_n(n)
        return cls(n, _normalize_terms(n, values))

    @classmethod
    def from_dense(cls, n: int, dense: Sequence) -> "EntVector":
        if len(dense) != (1 << n) - 1:
            raise ValueError("dense vector has wrong length")
        return cls.from_values(n, {i + 1: v for i, v in enumerate(dense)})

    @classmethod
    def from_function(cls, n: int, fn) -> "EntVector":
        """Tabulate ``fn(mask)`` over all nonempty subsets."""
        return cls.from_values(n, {m: fn(m) for m in coordinates(n)})

    def __getitem__(self, mask: int) -> Fraction:
        for m, c in self.values:
            if m == mask:
                return c
        return Fraction(0)

    def dense(self) -> list[Fraction]:
        vec = [Fraction(0)] * ((1 << self.n) - 1)
        for m, c in self.values:
            vec[m - 1] = c
        return vec

    def restrict(self, m: int) -> "EntVector":
        """Projection onto the coordinates of P({1..m})."""
        keep = (1 << m) - 1
        return EntVector(check_n(m), tuple((k, v) for k, v in self.values if not k & ~keep))

    def permute(self, perm: Mapping[int, int], n_target: int | None = None) -> "EntVector":
        n_target = self.n if n_target is None else n_target
        return EntVector.from_values(n_target, {map_mask(m, perm): v for m, v in self.values})

    def to_record(self) -> dict:
        return {"n": self.n, "values": {format_key(m): format_fraction(v) for m, v in self.values}}

    @classmethod
    def from_record(cls, rec: Mapping) -> "EntVector":
        n = int(rec["n"])
        return cls.from_values(n, {parse_key(k): to_fraction(v) for k, v in rec.get("values", {}).items()})


def evaluate(f: LinForm, v: EntVector) -> Fraction:
    if f.n != v.n:
        raise ValueError(f"dimension mismatch: form over {f.n} variables, vector over {v.n}")
    vals = dict(v.values)
    return sum((c * vals.get(m, 0) for m, c in f.terms), Fraction(0))


def canonicalize(f: LinForm) -> LinForm:
    """Scale to integer coefficients with gcd 1.

    Inequalities keep their sign.  Equalities are also sign-normalized so the
    lowest-mask coefficient is positive.
    """
    if not f.terms:
        return f
    den = lcm(*(c.denominator for _, c in f.terms))
    ints = [int(c * den) for _, c in f.terms]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if f.relation == EQ and ints[0] < 0:
        g = -g
    return LinForm(f.n, tuple((m, Fraction(x // g)) for (m, _), x in zip(f.terms, ints)), f.relation)


def map_mask(mask: int, perm: Mapping[int, int]) -> int:
    out = 0
    for v in mask_vars(mask):
        out |= 1 << (perm[v] - 1)
    return out


def _as_perm(perm) -> dict[int, int]:
    if isinstance(perm, Mapping):
        return dict(perm)
    return {i + 1: int(p) for i, p in enumerate(perm)}


def substitute(f: LinForm, perm, m_target: int | None = None) -> LinForm:
    """Rename variables: coordinate I becomes perm(I).

    ``perm`` maps each source variable 1..f.n to a target variable; it is
    either a mapping or a sequence whose i-th entry is the image of i+1.
    It must be injective.  The result lives on ``m_target`` variables.
    """
    p = _as_perm(perm)
    m_target = f.n if m_target is None else m_target
    check_n(m_target)
    if m_target < f.n:
        raise ValueError("target size smaller than the form's ground set")
    src = set(range(1, f.n + 1))
    if not src <= p.keys():
        raise ValueError("permutation does not cover every source variable")
    images = [p[v] for v in sorted(src)]
    if len(set(images)) != len(images) or any(not 1 <= t <= m_target for t in images):
        raise ValueError("variable map is not injective into the target ground set")
    return canonicalize(LinForm.from_coeffs(m_target, {map_mask(m, p): c for m, c in f.terms}, f.relation))


def _sort_key(f: LinForm) -> tuple:
    return tuple(f.dense())


def orbit(f: LinForm) -> set[LinForm]:
    """All distinct canonical forms obtained by permuting variables."""
    return {substitute(f, perm) for perm in itertools.permutations(range(1, f.n + 1))}


def orbit_canonical(f: LinForm) -> LinForm:
    """Lexicographically smallest canonical form over all variable permutations.

    Coefficient sequences are compared in ascending bitmask order.
    """
    if f.n > 8:
        raise ValueError("orbit canonical form is limited to n <= 8")
    return min(orbit(f), key=_sort_key)


def substitute_sets(f: LinForm, images: Sequence[int], n_target: int) -> LinForm:
    """Replace source variable i by the joint variable on bitmask ``images[i-1]``."""
    coeffs: dict[int, Fraction] = {}
    for m, c in f.terms:
        t = 0
        for v in mask_vars(m):
            t |= images[v - 1]
        coeffs[t] = coeffs.get(t, Fraction(0)) + c
    return canonicalize(LinForm.from_coeffs(n_target, coeffs, f.relation))


def embeddings(f: LinForm, n_target: int, joint: bool = True) -> list[LinForm]:
    """Distinct substituted forms of ``f`` on {1..n_target}, in first-seen order.

    Each source variable is replaced by a nonempty set of target variables,
    the sets pairwise disjoint (a joint variable of a valid inequality is
    again a random variable).  With ``joint=False`` only single variables
    are used, i.e. injective renamings.
    """
    check_n(n_target)
    if n_target < f.n:
        raise ValueError("target ground set is smaller than the form's")
    seen: dict[LinForm, None] = {}
    if not joint:
        for image in itertools.permutations(range(1, n_target + 1), f.n):
            seen.setdefault(substitute(f, image, n_target))
        return [g for g in seen if not g.is_zero()]
    for assign in itertools.product(range(f.n + 1), repeat=n_target):
        images = [0] * f.n
        for t, a in enumerate(assign):
            if a:
                images[a - 1] |= 1 << t
        if all(images):
            seen.setdefault(substitute_sets(f, images, n_target))
    return [g for g in seen if not g.is_zero()]


def dump_forms(forms: Iterable[LinForm]) -> str:
    """One JSON record per line."""
    return "".join(json.dumps(f.to_record()) + "\n" for f in forms)


def load_forms(text: str) -> list[LinForm]:
    """Read forms from JSON lines or a JSON list of records."""
    text = text.strip()
    if not text:
        return []
    if text.startswith("["):
        return [LinForm.from_record(r) for r in json.loads(text)]
    return [LinForm.from_record(json.loads(line)) for line in text.splitlines() if line.strip()]


def dump_vectors(vectors: Iterable[EntVector]) -> str:
    return "".join(json.dumps(v.to_record()) + "\n" for v in vectors)


def load_vectors(text: str) -> list[EntVector]:
    text = text.strip()
    if not text:
        return []
    if text.startswith("["):
        return [EntVector.from_record(r) for r in json.loads(text)]
    return [EntVector.from_record(json.loads(line)) for line in text.splitlines() if line.strip()]
