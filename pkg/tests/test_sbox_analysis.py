import numpy as np
import pytest

import oracles
from tbgroups.algebra import FieldSpec, SubgroupBasis, enumerate_subgroups
from tbgroups.cipher import SBox, identity_sbox, inversion_sbox, linear_sbox, random_sbox
from tbgroups.corpus import random_linear_sbox
from tbgroups.sbox_analysis import (check_anti_invariance, check_coset_condition, check_weak_uniformity,
                                    difference_image, min_subgroup_order_bound)

INV8 = inversion_sbox(FieldSpec.parse("2^3/1,1,0,1"))

# frozen from the brute-force oracle in tests/oracles.py
INV8_IMAGES = {1: {1, 3, 5, 7}, 2: {4, 5, 6, 7}, 3: {1, 3, 4, 6}, 4: {2, 3, 6, 7},
               5: {1, 2, 5, 6}, 6: {2, 3, 4, 5}, 7: {1, 2, 4, 7}}


def test_difference_image_examples():
    assert difference_image(identity_sbox(8), 3).image == {3}
    lin = linear_sbox(np.array([[1, 1, 0], [0, 1, 1], [0, 0, 1]]), 2)
    for a in range(1, 8):
        assert difference_image(lin, a).image == {lin.table[a]}
    for a, img in INV8_IMAGES.items():
        assert difference_image(INV8, a).image == img
    with pytest.raises(ValueError):
        difference_image(INV8, 0)


def test_weak_uniformity_examples():
    rep = check_weak_uniformity(identity_sbox(8), 2)
    assert not rep.passes and rep.min_image_size == 1 and rep.bound == 2
    assert not check_weak_uniformity(identity_sbox(9, 3), 3).passes
    rep = check_weak_uniformity(INV8, 2)
    assert rep.passes and rep.min_image_size == 4 and rep.witness_a == 1


def test_weak_uniformity_parameter_errors():
    with pytest.raises(ValueError):
        check_weak_uniformity(INV8, 1)
    with pytest.raises(ValueError):
        check_weak_uniformity(SBox((0, 1)), 2)


def test_anti_invariance_examples():
    assert not check_anti_invariance(identity_sbox(16), 2).passes
    rep = check_anti_invariance(INV8, 1)
    assert rep.passes and rep.violations == []
    # over F_2 every {0, a} maps onto the subgroup {0, f(a)}
    rep = check_anti_invariance(INV8, 2)
    assert not rep.passes and len(rep.violations) == 7 and {u.dim for u, _ in rep.violations} == {1}
    with pytest.raises(ValueError):
        check_anti_invariance(INV8, 3)
    with pytest.raises(ValueError, match="enumeration too large"):
        check_anti_invariance(identity_sbox(2**10), 2, budget_bits=8)


def test_anti_invariance_violations_are_exact():
    rng = np.random.default_rng(4)
    for _ in range(20):
        f = random_sbox(rng, 16)
        rep = check_anti_invariance(f, 3)
        for u, w in rep.violations:
            assert u.dim >= 1 and u.order < 16
            assert {f.table[x] for x in u.points().tolist()} == set(w.points().tolist())
        assert len(rep.violations) == sum(
            1 for u in enumerate_subgroups(4, 2, 1, 3)
            if oracles.is_subgroup({f.table[x] for x in u.points().tolist()}, 2, 4))


def test_anti_invariance_restrict():
    rng = np.random.default_rng(5)
    f = random_sbox(rng, 32)
    top = check_anti_invariance(f, 4)
    for r in range(1, 4):
        assert top.restrict(r, 5).violations == check_anti_invariance(f, r).violations


def test_coset_condition_examples():
    rep = check_coset_condition(identity_sbox(8))
    assert not rep.passes and rep.witness_a == 1
    rep = check_coset_condition(INV8)
    assert not rep.passes and rep.witness_a == 1


def test_anti_invariance_does_not_assume_zero_fixed():
    # x -> x + 1 maps the subgroups containing 1 onto themselves and the rest onto cosets
    shift = SBox(tuple(x ^ 1 for x in range(8)))
    rep = check_anti_invariance(shift, 2)
    assert all(u == w and 1 in u for u, w in rep.violations)
    assert len(rep.violations) == 1 + 3
    rng = np.random.default_rng(12)
    for _ in range(30):
        f = SBox(tuple(rng.permutation(9).tolist()), 3)
        assert check_anti_invariance(f, 1).passes == oracles.anti_invariant(f.table, 1, 3, 2)


@pytest.mark.parametrize("p,k", [(2, 3), (2, 4), (3, 2)])
def test_additive_bricks_fail_everything(p, k):
    rng = np.random.default_rng(p * 10 + k)
    f = random_linear_sbox(rng, p, k)
    for delta in range(p, p ** (k - 1) + 1):
        assert not check_weak_uniformity(f, delta).passes
    for r in range(1, k):
        assert not check_anti_invariance(f, r).passes
    assert not check_coset_condition(f).passes


def test_min_subgroup_order_bound():
    rng = np.random.default_rng(9)
    full = SubgroupBasis(2, 4, tuple(tuple(int(i == j) for j in range(4)) for i in range(4)))
    f = random_sbox(rng, 16)
    assert min_subgroup_order_bound(f, 1, full, range(16))
    # identity is not weakly 2-uniform and its images {a} sit in small W
    w = SubgroupBasis(2, 4, ((1, 0, 0, 0),))
    assert not min_subgroup_order_bound(identity_sbox(16), 1, w, [1])
    for _ in range(50):
        f = random_sbox(rng, 16)
        for u in enumerate_subgroups(4, 2, 1, 2):
            shifts = [a for a in u.points().tolist() if a]
            images = set().union(*(oracles.diff_image(f.table, a, 2, 4) for a in shifts))
            for w in enumerate_subgroups(4, 2, 1, 3):
                pts = set(w.points().tolist())
                direct = not images <= pts or w.order >= 2 ** 3
                assert min_subgroup_order_bound(f, 1, w, u) == direct
            if check_weak_uniformity(f, 2).passes:
                break
