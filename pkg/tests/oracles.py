"""Independent reference computations used by the tests.

Entropy vectors of explicit distributions (float, and exact as rational
combinations of logs of primes), the probabilistic copy construction, and
random small polyhedral cones.
"""

from __future__ import annotations

import math
import random
from collections import defaultdict
from fractions import Fraction
from functools import lru_cache
from itertools import product

from nonshannon.entropy_space import EntVector, LinForm, mask_vars
from nonshannon.lp import MatrixLP
from nonshannon.projection import chm_matrix, fm_matrix

# ---------------------------------------------------------------------------
# distributions


def random_distribution(n: int, rng: random.Random, alphabet: int = 3, support: int = 6,
                        denom: int = 12) -> dict[tuple, Fraction]:
    """Random rational pmf on ``alphabet**n`` with at most ``support`` atoms."""
    atoms = rng.sample(list(product(range(alphabet), repeat=n)), min(support, alphabet ** n))
    k = rng.randint(1, len(atoms))
    atoms = atoms[:k]
    # random composition of denom into k positive parts
    cuts = sorted(rng.sample(range(1, denom), k - 1)) if k > 1 else []
    parts = [b - a for a, b in zip([0] + cuts, cuts + [denom])]
    return {a: Fraction(p, denom) for a, p in zip(atoms, parts)}


def marginal(pmf, mask: int) -> dict[tuple, Fraction]:
    idx = [v - 1 for v in mask_vars(mask)]
    out: dict[tuple, Fraction] = defaultdict(Fraction)
    for x, p in pmf.items():
        out[tuple(x[i] for i in idx)] += p
    return out


def entropy_float(pmf, n: int) -> list[float]:
    """Dense entropy vector (bits) indexed by mask - 1."""
    return [-sum(float(p) * math.log2(p) for p in marginal(pmf, m).values() if p) for m in range(1, 1 << n)]


@lru_cache(maxsize=None)
def _factor(k: int) -> tuple[tuple[int, int], ...]:
    out, p = [], 2
    while p * p <= k:
        e = 0
        while k % p == 0:
            k //= p
            e += 1
        if e:
            out.append((p, e))
        p += 1
    if k > 1:
        out.append((k, 1))
    return tuple(out)


def _log_p(p: Fraction) -> dict[int, Fraction]:
    out: dict[int, Fraction] = defaultdict(Fraction)
    for q, e in _factor(p.numerator):
        out[q] += e
    for q, e in _factor(p.denominator):
        out[q] -= e
    return out


def entropy_exact(pmf, mask: int) -> dict[int, Fraction]:
    """H of the marginal on ``mask`` as {prime: c} meaning sum c log(prime)."""
    out: dict[int, Fraction] = defaultdict(Fraction)
    for p in marginal(pmf, mask).values():
        if p:
            for q, c in _log_p(p).items():
                out[q] -= p * c
    return out


def evaluate_exact(f: LinForm, pmf) -> dict[int, Fraction]:
    """f applied to the exact entropy vector; zero iff every entry vanishes."""
    out: dict[int, Fraction] = defaultdict(Fraction)
    for m, c in f.terms:
        for q, v in entropy_exact(pmf, m).items():
            out[q] += c * v
    return {q: v for q, v in out.items() if v}


def evaluate_float(f: LinForm, h: list[float]) -> float:
    return sum(float(c) * h[m - 1] for m, c in f.terms)


def copy_distribution(pmf, k: int, I: int) -> dict[tuple, Fraction]:
    """Append a copy of variable k over I: p(x, y) = p(x) P(X_k = y | X_I = x_I)."""
    idx = [v - 1 for v in mask_vars(I)]
    joint: dict[tuple, Fraction] = defaultdict(Fraction)
    for x, p in pmf.items():
        joint[(tuple(x[i] for i in idx), x[k - 1])] += p
    pi = marginal(pmf, I)
    out = {}
    for x, p in pmf.items():
        xi = tuple(x[i] for i in idx)
        for (a, y), q in joint.items():
            if a == xi:
                out[x + (y,)] = out.get(x + (y,), Fraction(0)) + p * q / pi[xi]
    return out


def entvector_float(pmf, n: int) -> EntVector:
    """Entropy vector rounded to rationals (for containment checks with slack)."""
    return EntVector.from_dense(n, [Fraction(h).limit_denominator(10 ** 12) for h in entropy_float(pmf, n)])


# ---------------------------------------------------------------------------
# random cones


def random_cone(rng: random.Random, d: int, rows: int, eq_rows: int = 0, lo: int = -3, hi: int = 3):
    A = [tuple(rng.randint(lo, hi) for _ in range(d)) for _ in range(rows)]
    E = [tuple(rng.randint(lo, hi) for _ in range(d)) for _ in range(eq_rows)]
    return A, E


def _implies(d, ineqs, eqs, targets, both_ways=()) -> bool:
    lp = MatrixLP(d, [dict(enumerate(r)) for r in ineqs], [dict(enumerate(e)) for e in eqs])
    for t in targets:
        if not lp.implied(dict(enumerate(t)))[0]:
            return False
    for t in both_ways:
        if not lp.implied(dict(enumerate(t)))[0] or not lp.implied({i: -x for i, x in enumerate(t)})[0]:
            return False
    return True


def fm_chm_agree(d: int, A, E, keep) -> tuple[bool, str]:
    """Project with both methods and compare the results as sets."""
    keep = sorted(keep)
    drop = [c for c in range(d) if c not in keep]
    fa, fe = fm_matrix(d, A, E, drop)
    fa = [tuple(r[c] for c in keep) for r in fa]
    fe = [tuple(r[c] for c in keep) for r in fe]
    res = chm_matrix(d, A, E, keep)
    k = len(keep)
    if not _implies(k, fa, fe, res.facets, res.equalities):
        return False, "CHM facet not implied by FM system"
    if not _implies(k, res.facets, res.equalities, fa, fe):
        return False, "FM row not implied by CHM system"
    if not res.equalities and len(set(fa)) != len(res.facets):
        return False, f"facet counts differ: fm {len(set(fa))} chm {len(res.facets)}"
    return True, ""
