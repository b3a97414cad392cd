import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from tbgroups.algebra import FieldSpec, VSpace, echelonize
from tbgroups.cipher import (RoundSpec, TbCipherSpec, apply_bricklayer, decrypt, encrypt, gamma_lambda,
                             group_generators, random_sbox, round_function, translation)
from tbgroups.corpus import random_toy_cipher, toy_spaces
from tbgroups.group_engine import Permutation, bsgs, classify_alt_sym, is_primitive, verify_block_coset_form
from tbgroups.mixing_analysis import find_imprimitivity_witness
from tbgroups.sbox_analysis import (check_anti_invariance, check_coset_condition, check_weak_uniformity,
                                    difference_image)

seeds = st.integers(0, 2**32 - 1)
SPACES = toy_spaces()
SMALL_SPACES = [sp for sp in SPACES if sp.size <= 81]
CLASS_RANK = {"ProperSubgroup": 0, "Alt": 1, "Sym": 2}
settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")


def perm(rng, n):
    return Permutation(rng.permutation(n))


@given(seeds, st.integers(2, 12))
def test_permutation_group_laws(seed, n):
    rng = np.random.default_rng(seed)
    a, b, c = perm(rng, n), perm(rng, n), perm(rng, n)
    assert (a * b) * c == a * (b * c)
    assert (a * b).inverse() == b.inverse() * a.inverse()
    assert (a * b).parity() == (a.parity() + b.parity()) % 2
    assert (a ** a.order()).is_identity()


@given(seeds, st.integers(3, 9))
def test_order_divides_factorial_and_monotone(seed, n):
    rng = np.random.default_rng(seed)
    gens = [perm(rng, n)]
    g = bsgs(gens)
    assert math.factorial(n) % g.order == 0
    bigger = bsgs(gens + [perm(rng, n)])
    assert bigger.order % g.order == 0
    assert CLASS_RANK[classify_alt_sym(bigger)] >= CLASS_RANK[classify_alt_sym(g)]
    for k in range(1, 6):
        assert gens[0] ** k in g


@given(seeds, st.sampled_from(SMALL_SPACES))
def test_cipher_group_invariants(seed, space):
    rng = np.random.default_rng(seed)
    c = random_toy_cipher(rng, space)
    gens = group_generators(c, 0)
    g = bsgs(gens, base=[0])
    assert g.order % space.size == 0
    assert all(x in g for x in gens)
    res = is_primitive(gens, space, g)
    if not res.primitive:
        assert space.size % res.blocks.block_size == 0
        assert verify_block_coset_form(res.blocks, space)
        cells = {frozenset(b) for b in res.blocks.blocks}
        for x in gens:
            assert {frozenset(x.table[list(b)].tolist()) for b in cells} == cells
    r = c.rounds[0]
    w = find_imprimitivity_witness(r.bricks, r.layer)
    assert (w is None) == res.primitive


@given(seeds, st.sampled_from(SPACES))
def test_round_function_properties(seed, space):
    rng = np.random.default_rng(seed)
    c = random_toy_cipher(rng, space)
    r = c.rounds[0]
    k = int(rng.integers(space.size))
    t = round_function(r, k)
    assert sorted(t.tolist()) == list(range(space.size))
    assert t == gamma_lambda(r) * translation(space, k)
    assert encrypt(c, k, np.arange(space.size)).tolist() == t.tolist()
    assert decrypt(c, k, t.table).tolist() == list(range(space.size))
    v = np.arange(space.size)
    out = apply_bricklayer(r.bricks, v, space)
    for i, b in enumerate(r.bricks):
        assert np.array_equal(space.brick_of(out, i), b.array()[space.brick_of(v, i)])


@given(seeds, st.sampled_from([(2, 3), (2, 4), (3, 2), (5, 2)]))
def test_sbox_check_properties(seed, pk):
    p, k = pk
    rng = np.random.default_rng(seed)
    f = random_sbox(rng, p**k, p)
    for a in range(1, p**k):
        assert difference_image(f, a).image == oracles.diff_image(f.table, a, p, k)
    # monotone in delta and in r
    results = [check_weak_uniformity(f, d).passes for d in range(p, p**k + 1)]
    assert results == sorted(results)
    anti = [check_anti_invariance(f, r).passes for r in range(1, k)]
    assert anti == sorted(anti, reverse=True)
    if check_coset_condition(f).passes:
        assert all(len(oracles.diff_image(f.table, a, p, k)) >= 2 for a in range(1, p**k))


@given(seeds, st.sampled_from([(2, 4), (3, 3), (2, 6)]), st.integers(1, 4))
def test_echelonize_spans_the_closure(seed, pe, count):
    p, e = pe
    rng = np.random.default_rng(seed)
    vecs = rng.integers(0, p, size=(count, e))
    w = echelonize(vecs.tolist(), e, p)
    pts = [oracles.undigits(v, p) for v in vecs.tolist()]
    assert set(w.points().tolist()) == oracles.closure(pts, p, e)


@given(seeds)
def test_json_roundtrip_with_key_schedule(seed):
    rng = np.random.default_rng(seed)
    sp = VSpace(FieldSpec.prime(3), 2, 2)
    r0 = random_toy_cipher(rng, sp).rounds[0]
    r1 = RoundSpec(r0.bricks, r0.layer, proper=False)
    ks = np.stack([rng.permutation(sp.size), rng.integers(0, sp.size, sp.size)], axis=1)
    c = TbCipherSpec(sp, (r0, r1), ks)
    again = TbCipherSpec.loads(c.dumps())
    assert again.dumps() == c.dumps()
    k = int(rng.integers(sp.size))
    assert np.array_equal(encrypt(again, k, np.arange(sp.size)), encrypt(c, k, np.arange(sp.size)))
