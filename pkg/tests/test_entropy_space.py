import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from nonshannon.derivation import ZHANG_YEUNG
from nonshannon.entropy_space import (
    EQ,
    GE,
    EntVector,
    LinForm,
    canonicalize,
    embeddings,
    evaluate,
    format_key,
    load_forms,
    mask_vars,
    orbit,
    orbit_canonical,
    parse_key,
    subset_mask,
    subsets,
    substitute,
    substitute_sets,
)


def forms(n_max=4):
    @st.composite
    def build(draw):
        n = draw(st.integers(1, n_max))
        coeffs = draw(st.dictionaries(st.integers(1, (1 << n) - 1),
                                      st.fractions(min_value=-20, max_value=20, max_denominator=6), max_size=6))
        rel = draw(st.sampled_from([GE, EQ]))
        return LinForm.from_coeffs(n, coeffs, rel)
    return build()


def test_subset_masks():
    assert subset_mask([1, 3]) == 0b101
    assert mask_vars(0b1101) == (1, 3, 4)
    assert parse_key("1,3,4") == 0b1101 and format_key(0b1101) == "1,3,4"
    assert subsets(0b101) == [0, 1, 4, 5]
    with pytest.raises(ValueError):
        subset_mask([0])


def test_evaluate_examples():
    v = EntVector.from_function(4, lambda m: min(len(mask_vars(m)), 3))
    assert evaluate(ZHANG_YEUNG, v) == 0
    assert evaluate(LinForm.zero(4), v) == 0
    assert evaluate(LinForm.from_sets(1, {(1,): 1}), EntVector.from_values(1, {1: 5})) == 5
    with pytest.raises(ValueError):
        evaluate(ZHANG_YEUNG, EntVector.from_function(3, lambda m: 1))


def test_empty_set_coefficient_rejected():
    with pytest.raises(ValueError):
        LinForm.from_coeffs(2, {0: 1})
    with pytest.raises(ValueError):
        LinForm.from_record({"n": 2, "rel": "ge", "coeffs": {"1,3": "1"}})


@given(forms())
def test_canonical_form(f):
    c = canonicalize(f)
    assert canonicalize(c) == c
    assert all(x.denominator == 1 for _, x in c.terms)
    if c.terms:
        from math import gcd
        g = 0
        for _, x in c.terms:
            g = gcd(g, int(x))
        assert g == 1
        if c.relation == EQ:
            assert c.terms[0][1] > 0
    assert [m for m, _ in c.terms] == sorted(m for m, _ in c.terms)


@given(forms(), st.integers(1, 6))
def test_scaling_invariance(f, k):
    assert canonicalize(f.scale(Fraction(k, 7))) == canonicalize(f)


@given(forms())
def test_record_round_trip(f):
    rec = json.loads(json.dumps(f.to_record()))
    assert LinForm.from_record(rec) == f
    assert load_forms(json.dumps(rec)) == [f]


@given(forms(3), st.permutations([1, 2, 3]))
def test_substitution_preserves_evaluation(f, perm):
    f = f.lift(3)
    v = EntVector.from_function(3, lambda m: len(mask_vars(m)) ** 2 + m)
    p = dict(zip([1, 2, 3], perm))
    g = substitute(f, perm)
    vp = EntVector.from_function(3, lambda m: v[sum(1 << (p[x] - 1) for x in mask_vars(m))])
    a, b = evaluate(canonicalize(f), vp), evaluate(g, v)
    if f.relation == EQ:  # equalities are sign-normalized after renaming
        a, b = abs(a), abs(b)
    assert a == b


def test_substitute_rejects_non_injective():
    with pytest.raises(ValueError):
        substitute(ZHANG_YEUNG, [1, 1, 2, 3])


def test_orbit():
    i12 = LinForm.from_sets(3, {(1, 3): 1, (2, 3): 1, (1, 2, 3): -1, (3,): -1})
    assert len(orbit(i12)) == 3
    assert orbit_canonical(substitute(i12, [3, 1, 2])) == orbit_canonical(i12)
    assert len(orbit(ZHANG_YEUNG)) == 12


def test_embeddings():
    f = LinForm.from_sets(2, {(1,): 1, (2,): 1, (1, 2): -1})  # I(1;2) >= 0
    inj = embeddings(f, 3, joint=False)
    assert len(inj) == 3
    joint = embeddings(f, 3)
    # adds I(1;23), I(2;13), I(3;12)
    assert len(joint) == 6
    assert set(inj) <= set(joint)
    assert substitute_sets(f, [0b001, 0b110], 3) in joint
    assert set(embeddings(ZHANG_YEUNG, 4)) == set(embeddings(ZHANG_YEUNG, 4, joint=False)) == orbit(ZHANG_YEUNG)
