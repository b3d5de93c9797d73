from fractions import Fraction
from itertools import combinations

import pytest

from branched_decay.extension import (ExtendedPath, Partition, TruncatedPath,
                                      drop_point_residual, extend, extension_chen_defect,
                                      partition_sum)
from branched_decay.lift import IdentityPath, NonConvergenceError, PathData, lift_polynomial
from branched_decay.trees import enumerate_trees_upto, ladder, parse_tree


def identity_value(tr, s, t):
    return Fraction(t - s) ** tr.size / tr.factorial


def test_partition_sum_two_intervals():
    X = TruncatedPath.identity(1)
    P = Partition((Fraction(0), Fraction(1, 2), Fraction(1)))
    # left-point sum: 0·½ + ½·½
    assert partition_sum(X, 2, P, ladder(2)) == Fraction(1, 4)


def test_partition_sum_refines_to_limit():
    X = TruncatedPath.identity(1)
    for level in (2, 4, 6):
        m = 2 ** level
        got = partition_sum(X, 2, Partition.dyadic(0, 1, level), ladder(2))
        assert got == Fraction(m - 1, 2 * m)


def test_partition_sum_rejects_low_degree():
    X = TruncatedPath.identity(2)
    with pytest.raises(ValueError):
        partition_sum(X, 2, Partition.dyadic(0, 1, 1), ladder(2))


def test_partition_sum_needs_lower_degrees():
    X = TruncatedPath.identity(1)
    with pytest.raises(ValueError):
        partition_sum(X, 3, Partition.dyadic(0, 1, 1), ladder(3))


@pytest.mark.parametrize("j", [1, 2, 3])
def test_drop_point_identity(j):
    X = TruncatedPath(IdentityPath(), 4, gamma=0.3)
    # N = 1 on degree-4 data: the closed form sees the full character
    P = Partition((Fraction(1, 8), Fraction(1, 4), Fraction(1, 2), Fraction(5, 8), Fraction(1)))
    for tr in enumerate_trees_upto(4):
        if tr.size < 2:
            continue
        direct, closed = drop_point_residual(X, P, j, tr.size, Fraction(0), tr, N=1)
        assert direct == closed


def test_partition_validation():
    with pytest.raises(ValueError):
        Partition((0, 0))
    with pytest.raises(ValueError):
        Partition((0, 1)).without(0)
    P = Partition.dyadic(Fraction(0), Fraction(1), 2)
    assert P.mesh == Fraction(1, 4) and len(P.without(2)) == 4


def test_identity_extension_exact_mode():
    X = TruncatedPath.identity(1)
    res = extend(X, 4, Fraction(1, 4), Fraction(3, 4), tol=1e-12)
    for tr in enumerate_trees_upto(4):
        assert res.values[tr] == identity_value(tr, Fraction(1, 4), Fraction(3, 4))


def test_identity_extension_float_level_12():
    X = TruncatedPath.identity(1)
    for s, t in combinations([0.0, 0.25, 0.5, 1.0], 2):
        res = extend(X, 4, s, t, tol=1e-8, min_level=12, max_level=12, strict=False)
        for tr in enumerate_trees_upto(4):
            assert abs(res.values[tr] - float(identity_value(tr, Fraction(s), Fraction(t)))) < 1e-8


def test_polynomial_extension_matches_lift():
    poly = PathData.polynomial(((0, 1), (0, 0, 1)))
    full = lift_polynomial(poly, 3)
    X = TruncatedPath(lift_polynomial(poly, 1), 1, gamma=1.0)
    res = extend(X, 3, Fraction(0), Fraction(1, 2), tol=1e-12)
    for tr in full.polys:
        assert res.values[tr] == full.value(tr, 0, Fraction(1, 2))


def test_extension_is_chen():
    path = ExtendedPath(TruncatedPath.identity(1), 3, tol=1e-12)
    defect = extension_chen_defect(path, Fraction(0), Fraction(1, 4), Fraction(3, 4))
    assert defect == 0


def test_extension_nonconvergence_and_validation():
    X = TruncatedPath.identity(1)
    with pytest.raises(NonConvergenceError):
        extend(X, 4, 0.0, 1.0, tol=1e-14, max_level=3)
    with pytest.raises(ValueError):
        extend(X, 3, 0.0, 1.0, tol=0)
    with pytest.raises(ValueError):
        extend(TruncatedPath.identity(2), 1, 0.0, 1.0)
    with pytest.raises(ValueError):
        extend(X, 3, 1.0, 0.5)


def test_extension_json():
    res = extend(TruncatedPath.identity(1), 2, Fraction(0), Fraction(1), tol=1e-12)
    text = res.to_json()
    assert '"schema": 1' in text and "[*]" in text


def test_truncated_path_hides_high_degrees():
    X = TruncatedPath.identity(2)
    ch = X.character(0, 1)
    assert set(ch.tree_values) == set(enumerate_trees_upto(2))
    assert ch(parse_tree("[*]")) == Fraction(1, 2)
