import math
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given

from branched_decay.hopf import (HopfElement, coassociativity_sides, coproduct_forest,
                                 coproduct_tree, cut_pairs, cut_sum_over_trunk,
                                 cut_sum_over_trunk_exact, induction_sides,
                                 log_cut_sum_over_trunk, permutation_classes, trunk_groups,
                                 trunks_of, tree_binomial)
from branched_decay.trees import (EMPTY, Forest, bushy, enumerate_forests_upto,
                                  enumerate_trees_upto, ladder, parse_forest, parse_tree)
from oracles import brute_force_cuts, brute_force_forest_cuts
from strategies import forests, trees


def test_coproduct_of_cherry():
    t = parse_tree("[*.*]")
    got = {(p.notation(), tr.notation()): m for (p, tr), m in cut_pairs(t)}
    assert got == {("1", "[*.*]"): 1, ("*", "[*]"): 2, ("*.*", "*"): 1, ("[*.*]", "1"): 1}


def test_coproduct_of_ladder():
    got = {(p.notation(), tr.notation()): m for (p, tr), m in cut_pairs(ladder(3))}
    assert got == {("1", "[[*]]"): 1, ("*", "[*]"): 1, ("[*]", "*"): 1, ("[[*]]", "1"): 1}


@pytest.mark.parametrize("t", enumerate_trees_upto(6), ids=str)
def test_coproduct_matches_edge_subsets(t):
    assert Counter(dict(cut_pairs(t))) == brute_force_cuts(t)


@given(trees(5, alphabet=2))
def test_labelled_coproduct_matches_edge_subsets(t):
    assert Counter(dict(cut_pairs(t))) == brute_force_cuts(t)


@given(forests(max_trees=3, max_size=3))
def test_forest_coproduct_matches_oracle(f):
    assert Counter(dict(cut_pairs(f))) == brute_force_forest_cuts(f)


@given(forests(max_trees=3, max_size=3), forests(max_trees=2, max_size=3))
def test_coproduct_is_multiplicative(a, b):
    lhs = HopfElement.of(a * b).coproduct()
    rhs: Counter = Counter()
    for (p, tr), m in cut_pairs(a):
        for (q, s), k in cut_pairs(b):
            rhs[(p * q, tr * s)] += m * k
    assert lhs == {key: Fraction(v) for key, v in rhs.items()}


@pytest.mark.parametrize("f", enumerate_forests_upto(5), ids=str)
def test_coassociativity(f):
    left, right = coassociativity_sides(f)
    assert left == right


@given(forests(max_trees=2, max_size=4, alphabet=2))
def test_counit_laws(f):
    pairs = dict(cut_pairs(f))
    assert pairs[(EMPTY, f)] == 1 and pairs[(f, EMPTY)] == 1
    assert sum(1 for (p, tr) in pairs if p == EMPTY) == 1
    assert sum(1 for (p, tr) in pairs if tr == EMPTY) == 1


def test_cut_term_view_agrees():
    f = parse_forest("[*].*")
    terms = coproduct_forest(f)
    assert {(t.pruned, t.trunk): t.multiplicity for t in terms} == dict(cut_pairs(f))
    assert coproduct_tree(bushy(2)) == coproduct_forest(bushy(2))


@pytest.mark.parametrize("t", enumerate_trees_upto(7), ids=str)
def test_tree_binomial(t):
    for l in range(t.size + 1):
        assert tree_binomial(t, l) == math.comb(t.size, l)


def test_tree_binomial_range():
    with pytest.raises(ValueError):
        tree_binomial(ladder(2), 3)


def test_hopf_element_arithmetic():
    a = HopfElement.of(parse_forest("*"), 2)
    b = HopfElement.of(parse_forest("[*]"), Fraction(1, 3))
    assert (a + b - b) == a
    assert (a * a).terms == {parse_forest("*.*"): 4}
    assert HopfElement.of(parse_forest("*")).scale(0) == HopfElement()


def test_trunks_and_groups():
    t = parse_tree("[*.[*]]")
    assert trunks_of(t) == {parse_tree(x) for x in ["*", "[*]", "[[*]]", "[*.*]", "[*.[*]]"]}
    assert None in trunk_groups(t)


@given(trees(6))
def test_trunk_sum_exact_agrees_with_float(t):
    for sigma in trunk_groups(t):
        exact = float(cut_sum_over_trunk_exact(t, sigma, 2))
        approx = cut_sum_over_trunk(t, sigma, 1.0, 2.0)
        assert abs(exact - approx) <= 1e-12 * exact
        assert abs(log_cut_sum_over_trunk(t, sigma, 1.0, 0.6931471805599453)
                   - math.log(approx)) < 1e-12


@pytest.mark.parametrize("t", enumerate_trees_upto(6), ids=str)
def test_induction_identity(t):
    for sigma in trunks_of(t):
        if sigma == t:
            continue
        lhs, rhs = induction_sides(t, sigma, beta=3)
        assert lhs == rhs


def test_permutation_classes_small():
    t = parse_tree("[*.*.[*]]")
    pc = permutation_classes(t, parse_tree("[*]"))
    assert pc.p_sigma == 3
    assert pc.p_prime == 3 and pc.k == 2
    pc = permutation_classes(t, parse_tree("[*.*]"))
    assert pc.k == 1


def test_permutation_classes_arity():
    with pytest.raises(ValueError):
        permutation_classes(parse_tree("[*]"), parse_tree("[*.*]"))


def test_empty_forest_coproduct():
    assert cut_pairs(Forest()) == (((EMPTY, EMPTY), 1),)
