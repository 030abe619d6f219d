"""An infinite family of 4-variable non-Shannon inequalities indexed by s >= 1.

The coefficients involve S+ = (2+sqrt2)^s and S- = (2-sqrt2)^s only through

    u_s = S+ + S-             (integer)
    w_s = (S+ - S-) / sqrt2   (integer)

which both satisfy x_{s+1} = 4 x_s - 2 x_{s-1} with u_0 = 2, w_0 = 0,
u_1 = 4, w_1 = 2.  Nothing irrational is ever materialized.
"""

from __future__ import annotations

from fractions import Fraction

from .copy_lemma import Scenario, scenario_cone
from .entropy_space import LinForm, canonicalize
from .lp import Certificate, infer
from .shannon import Cone, adjoin, shannon_cone


def uw(s: int) -> tuple[int, int]:
    """(u_s, w_s) from the integer recurrence."""
    if s < 0:
        raise ValueError("s must be nonnegative")
    u0, w0, u1, w1 = 2, 0, 4, 2
    if s == 0:
        return u0, w0
    for _ in range(s - 1):
        u0, u1 = u1, 4 * u1 - 2 * u0
        w0, w1 = w1, 4 * w1 - 2 * w0
    return u1, w1


def seq_coefficients(s: int) -> dict[tuple[int, ...], Fraction]:
    """Raw coefficients of the s-th inequality keyed by variable tuples."""
    if s < 1:
        raise ValueError(f"sequence index must be >= 1, got {s}")
    u, w = uw(s)
    p = 2 ** (s - 1)
    # sqrt2/4 (S+ - S-) = w/2 ; sqrt2 (S+ - S-) = 2w ; (S+ + S-) = u
    a = Fraction(p) - Fraction(w, 2)
    d = Fraction(2 * w - u, 4)
    return {
        (1,): a,
        (2,): a,
        (3,): Fraction(-1),
        (1, 2): 1 - 3 * p + Fraction(w),
        (1, 3): Fraction(u, 4),
        (2, 3): Fraction(u, 4),
        (1, 4): d,
        (2, 4): d,
        (3, 4): Fraction(1 - p),
        (1, 2, 3): Fraction(p) - Fraction(u, 2),
        (1, 2, 4): -(1 - p + Fraction(2 * w - u, 2)),
    }


def seq_inequality(s: int) -> LinForm:
    return canonicalize(LinForm.from_sets(4, seq_coefficients(s)))


COPY_SCENARIO = Scenario.build(4, [(3, [1, 2], [4])])


class FamilyBroken(AssertionError):
    """An induction step failed to certify; the family would be falsified."""


def seq_step_cone(s: int, scenario: Scenario = COPY_SCENARIO) -> Cone:
    """Lifted cone used to prove the s-th member from the (s-1)-th."""
    base = adjoin(shannon_cone(scenario.m), [seq_inequality(s - 1)], substituted=True)
    return scenario_cone(scenario, base)


def verify_seq_step(s: int, scenario: Scenario = COPY_SCENARIO) -> tuple[Cone, Certificate]:
    """Certify member s against H_5 + substituted member s-1, intersected with the copy equalities."""
    if s < 2:
        raise ValueError("induction steps start at s = 2")
    cone = seq_step_cone(s, scenario)
    res = infer(cone, seq_inequality(s).lift(cone.n))
    if not res.implied:
        raise FamilyBroken(f"member s={s} is not implied by the step cone")
    return cone, res.cert
