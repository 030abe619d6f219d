import random
from math import comb

import pytest

from nonshannon.entropy_space import LinForm
from nonshannon.lp import ConeLP, infer
from nonshannon.projection import dd_rays
from nonshannon.shannon import Cone, adjoin, elemental_inequalities, polymatroid_inequalities, shannon_cone

from oracles import entropy_float, evaluate_float, random_distribution


@pytest.mark.parametrize("n", range(2, 8))
def test_elemental_count(n):
    assert len(elemental_inequalities(n)) == n + comb(n, 2) * 2 ** (n - 2)


def test_small_cases():
    assert len(shannon_cone(1).ineqs) == 1
    h2 = elemental_inequalities(2)
    assert LinForm.from_sets(2, {(1,): 1, (2,): 1, (1, 2): -1}) in h2


@pytest.mark.parametrize("n", [2, 3, 4])
def test_elementals_irredundant(n):
    el = elemental_inequalities(n)
    for i, f in enumerate(el):
        rest = Cone(n, tuple(el[:i] + el[i + 1:]))
        assert not infer(rest, f).implied


@pytest.mark.parametrize("n", [2, 3, 4])
def test_polymatroid_axioms_equivalent(n):
    poly = Cone(n, tuple(polymatroid_inequalities(n)))
    h = shannon_cone(n)
    assert all(ConeLP(h).infer(f).implied for f in poly.ineqs)
    assert all(ConeLP(poly).infer(f).implied for f in h.ineqs)


def test_ray_counts():
    assert len(dd_rays(shannon_cone(2))) == 3
    assert len(dd_rays(shannon_cone(3))) == 8
    rays = dd_rays(shannon_cone(4))
    assert len(rays) == 41
    assert all(shannon_cone(4).contains(r) for r in rays)


def test_adjoin():
    f = LinForm.from_sets(2, {(1,): 1, (2,): 1, (1, 2): -1})
    c = adjoin(shannon_cone(3), [f], substituted=True)
    # I(1;2), I(1;3), I(2;3) are elemental; I(1;23), I(2;13), I(3;12) are new rows
    assert len(c.ineqs) == 12
    assert all(ConeLP(shannon_cone(3)).infer(g).implied for g in c.ineqs)
    with pytest.raises(ValueError):
        adjoin(shannon_cone(2), [LinForm.zero(3)])


def test_soundness_random_distributions():
    rng = random.Random(7)
    for n in (3, 4):
        el = elemental_inequalities(n)
        for _ in range(500):
            h = entropy_float(random_distribution(n, rng), n)
            assert min(evaluate_float(f, h) for f in el) >= -1e-9
