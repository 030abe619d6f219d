import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from nonshannon.derivation import ONE_COPY, ZHANG_YEUNG
from nonshannon.copy_lemma import scenario_cone
from nonshannon.entropy_space import LinForm, evaluate
from nonshannon.lp import (
    Certificate,
    ConeLP,
    check_certificate,
    check_witness,
    cone_point_in_projection,
    infer,
    nonneg_solution,
    point_in_projection,
    primitive,
    solve,
)
from nonshannon.shannon import Cone, elemental_inequalities, shannon_cone

small_ints = st.integers(-4, 4)


@st.composite
def lp_instances(draw):
    rows = draw(st.integers(1, 5))
    cols = draw(st.integers(1, 6))
    columns = [{i: draw(small_ints) for i in range(rows)} for _ in range(cols)]
    rhs = [draw(small_ints) for _ in range(rows)]
    return columns, rhs


@given(lp_instances())
def test_nonneg_solution_outcomes_verified(inst):
    # nonneg_solution re-verifies both outcomes exactly and raises otherwise
    columns, rhs = inst
    res = nonneg_solution(columns, rhs)
    assert res.feasible == (res.solution is not None)


@st.composite
def cone_and_target(draw):
    n = draw(st.integers(2, 3))
    d = (1 << n) - 1
    el = elemental_inequalities(n)
    picked = draw(st.lists(st.sampled_from(el), min_size=1, max_size=len(el), unique=True))
    extra = draw(st.lists(st.lists(small_ints, min_size=d, max_size=d), max_size=3))
    ineqs = picked + [LinForm.from_coeffs(n, {m + 1: c for m, c in enumerate(r)}) for r in extra]
    eqs = []
    if draw(st.booleans()):
        e = draw(st.lists(small_ints, min_size=d, max_size=d))
        eqs.append(LinForm.from_coeffs(n, {m + 1: c for m, c in enumerate(e)}, "eq"))
    target = draw(st.lists(small_ints, min_size=d, max_size=d))
    cone = Cone(n, tuple(f for f in ineqs if not f.is_zero()), tuple(f for f in eqs if not f.is_zero()))
    return cone, LinForm.from_coeffs(n, {m + 1: c for m, c in enumerate(target)})


@given(cone_and_target())
def test_farkas_round_trip(ct):
    cone, target = ct
    res = infer(cone, target)
    if res.implied:
        assert check_certificate(cone, res.cert)
        back = Certificate.from_record(json.loads(json.dumps(res.cert.to_record())))
        assert back == res.cert and check_certificate(cone, back)
        if back.ineq_multipliers:
            k = min(back.ineq_multipliers)
            bumped = dict(back.ineq_multipliers)
            bumped[k] += 1
            assert not check_certificate(cone, Certificate(bumped, back.eq_multipliers, back.target))
    else:
        assert check_witness(cone, target, res.witness)
        assert not infer(cone, target.negate()).implied or evaluate(target, res.witness) < 0


def test_certificate_index_errors():
    c = shannon_cone(2)
    bad = Certificate({7: Fraction(1)}, {}, c.ineqs[0])
    with pytest.raises(IndexError):
        check_certificate(c, bad)


def test_zhang_yeung_non_shannon():
    res = infer(shannon_cone(4), ZHANG_YEUNG)
    assert not res.implied and check_witness(shannon_cone(4), ZHANG_YEUNG, res.witness)


def test_zhang_yeung_from_copy():
    cone = scenario_cone(ONE_COPY)
    res = infer(cone, ZHANG_YEUNG.lift(5))
    assert res.implied and check_certificate(cone, res.cert)


def test_infer_examples():
    h3 = shannon_cone(3)
    lp = ConeLP(h3)
    assert lp.infer(h3.ineqs[0]).implied
    assert lp.infer(h3.ineqs[1] + h3.ineqs[5]).implied
    assert not lp.infer(h3.ineqs[0].negate()).implied


def test_solve():
    h2 = shannon_cone(2)
    assert solve(h2.ineqs[0], h2, "min").status == "bounded-at-zero"
    assert solve(h2.ineqs[0], h2, "max").status == "unbounded"
    with pytest.raises(ValueError):
        solve(h2.ineqs[0], h2, "avg")


def test_point_in_projection():
    # {x1 - x2 >= 0, x2 >= 0} projected on x1 is x1 >= 0
    A1, A2 = [[1], [0]], [[-1], [1]]
    assert point_in_projection(A1, A2, [0, 0], [3])
    assert not point_in_projection(A1, A2, [0, 0], [-1])
    # with an equality x1 = 2 x2
    assert point_in_projection(A1, A2, None, [2], [[1]], [[-2]], [0])
    with pytest.raises(ValueError):
        point_in_projection(A1, A2, [0], [1])


def test_cone_point_in_projection():
    h3 = shannon_cone(3)
    from nonshannon.entropy_space import EntVector
    ok = EntVector.from_values(2, {1: 1, 2: 1, 3: 2})
    bad = EntVector.from_values(2, {1: 1, 2: 1, 3: 3})
    assert cone_point_in_projection(h3, 2, ok)
    assert not cone_point_in_projection(h3, 2, bad)


def test_primitive():
    assert primitive([Fraction(1, 2), Fraction(-3, 4)]) == [2, -3]
    assert primitive([0, 0]) == [0, 0]
