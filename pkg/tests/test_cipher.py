import json

import numpy as np
import pytest

from tbgroups.algebra import FieldSpec, VSpace
from tbgroups.cipher import (MixingLayer, RoundSpec, SBox, TbCipherSpec, apply_bricklayer, decrypt, encrypt,
                             encryption_table, gamma_lambda, group_generators, identity_layer, identity_sbox,
                             inversion_sbox, linear_sbox, random_layer, random_sbox, round_function,
                             swap_layer, translation)
from tbgroups.corpus import random_toy_cipher, toy_spaces
from tbgroups.group_engine import bsgs

F2 = FieldSpec.prime(2)
F8 = FieldSpec.parse("2^3/1,1,0,1")


def one_round(space, bricks, layer, proper=True, **kw):
    return TbCipherSpec(space, (RoundSpec(tuple(bricks), layer, proper),), **kw)


def test_sbox_validation():
    assert SBox((0, 2, 1, 3)).m_p == 2
    assert SBox(tuple(range(9)), 3).m_p == 2
    with pytest.raises(ValueError, match="bijection"):
        SBox((0, 1, 1, 3))
    with pytest.raises(ValueError, match="power"):
        SBox((0, 1, 2))


def test_bricklayer_example():
    sp = VSpace(F2, 2, 2)
    b = SBox((0, 2, 1, 3))
    assert apply_bricklayer([b, b], 5, sp) == 10
    assert apply_bricklayer([b, b], 0, sp) == 0
    ident = identity_sbox(4)
    assert apply_bricklayer([ident, ident], np.arange(16), sp).tolist() == list(range(16))


def test_bricklayer_size_mismatch():
    sp = VSpace(F2, 2, 2)
    with pytest.raises(ValueError):
        apply_bricklayer([identity_sbox(8)] * 2, 3, sp)
    with pytest.raises(ValueError):
        apply_bricklayer([identity_sbox(4)] * 3, 3, sp)


def test_bricklayer_projections():
    rng = np.random.default_rng(3)
    sp = VSpace(FieldSpec.prime(3), 2, 3)
    bricks = [random_sbox(rng, 9, 3) for _ in range(3)]
    v = np.arange(sp.size)
    out = apply_bricklayer(bricks, v, sp)
    for i, b in enumerate(bricks):
        assert np.array_equal(sp.brick_of(out, i), b.array()[sp.brick_of(v, i)])


def test_round_brick_checks():
    sp = VSpace(F2, 2, 2)
    with pytest.raises(ValueError, match="fix 0"):
        RoundSpec((SBox((1, 0, 2, 3)), identity_sbox(4)), identity_layer(sp))
    with pytest.raises(ValueError):
        RoundSpec((identity_sbox(4),), identity_layer(sp))


def test_singular_layer_rejected():
    sp = VSpace(F2, 2, 2)
    with pytest.raises(ValueError, match="invertible"):
        MixingLayer(sp, ((1, 1, 0, 0),) * 4)


def test_round_function_identity_cases():
    sp = VSpace(F2, 2, 2)
    r = RoundSpec((identity_sbox(4),) * 2, identity_layer(sp))
    assert round_function(r, 0).is_identity()
    t = round_function(r, 6)
    assert t == translation(sp, 6)
    assert (t ** 2).is_identity() and not t.is_identity()


def test_round_function_is_rho_then_translation():
    rng = np.random.default_rng(0)
    for sp in toy_spaces()[:6]:
        c = random_toy_cipher(rng, sp)
        r = c.rounds[0]
        rho = gamma_lambda(r)
        assert rho(0) == 0
        for k in rng.integers(0, sp.size, size=3):
            k = int(k)
            assert round_function(r, k) == rho * translation(sp, k)


def test_two_keys_differ_by_translation():
    rng = np.random.default_rng(1)
    sp = VSpace(FieldSpec.prime(3), 2, 2)
    c = random_toy_cipher(rng, sp)
    r = c.rounds[0]
    k1, k2 = 4, 71
    assert round_function(r, k2) == round_function(r, k1) * translation(sp, int(sp.sub(k2, k1)))


def test_inversion_swap_64_point():
    sp = VSpace(F2, 3, 2)
    inv = inversion_sbox(F8)
    assert inv.table == (0, 1, 5, 6, 7, 2, 3, 4)
    r = RoundSpec((inv, inv), swap_layer(sp))
    rho = gamma_lambda(r)
    # swap layer: brick 1 of the output is brick 2 of the input and vice versa
    expected = [inv.table[v // 8] + 8 * inv.table[v % 8] for v in range(64)]
    assert rho.tolist() == expected
    c = one_round(sp, (inv, inv), swap_layer(sp))
    assert len(group_generators(c, 0)) == 1 + 6
    # v = 0 encrypts to the round key under one round
    assert encrypt(c, 37, 0) == 37


def test_group_generators_identity_cipher():
    sp = VSpace(F2, 2, 2)
    c = one_round(sp, (identity_sbox(4),) * 2, identity_layer(sp))
    gens = group_generators(c, 0)
    assert len(gens) == 1 + sp.e
    assert bsgs(gens).order == sp.size


def test_group_generators_improper_round():
    sp = VSpace(F2, 2, 2)
    ks = np.stack([np.arange(16), np.zeros(16, dtype=int)], axis=1)
    rounds = (RoundSpec((identity_sbox(4),) * 2, identity_layer(sp), True),
              RoundSpec((identity_sbox(4),) * 2, swap_layer(sp), False))
    c = TbCipherSpec(sp, rounds, ks)
    assert len(group_generators(c, "all")) == 2 + sp.e
    with pytest.raises(ValueError, match="not proper"):
        group_generators(c, 1)


def test_no_proper_round():
    sp = VSpace(F2, 2, 2)
    with pytest.raises(ValueError, match="no proper round"):
        one_round(sp, (identity_sbox(4),) * 2, identity_layer(sp), proper=False)


def test_proper_flag_needs_surjective_keys():
    sp = VSpace(F2, 2, 2)
    ks = np.zeros((16, 1), dtype=int)
    with pytest.raises(ValueError, match="cover V"):
        one_round(sp, (identity_sbox(4),) * 2, identity_layer(sp), key_schedule=ks)


def test_encrypt_identity_and_translation():
    sp = VSpace(F2, 2, 2)
    c = one_round(sp, (identity_sbox(4),) * 2, identity_layer(sp))
    assert encrypt(c, 0, 9) == 9
    assert encrypt(c, 6, 9) == 9 ^ 6
    with pytest.raises(KeyError):
        encrypt(c, 16, 0)


def test_encrypt_is_composition_and_decrypt_inverts():
    rng = np.random.default_rng(7)
    sp = VSpace(FieldSpec.prime(3), 2, 2)
    layers = [random_layer(sp, rng) for _ in range(3)]
    rounds = tuple(RoundSpec(tuple(random_sbox(rng, 9, 3) for _ in range(2)), lay) for lay in layers)
    ks = rng.integers(0, sp.size, size=(5, 3))
    ks[:, 1] = rng.permutation(sp.size)[:5]
    c = TbCipherSpec(sp, rounds, np.vstack([ks, np.stack([np.arange(81)] * 3, axis=1)]))
    for k in (0, 3, 40):
        composed = round_function(rounds[0], c.round_key(k, 0))
        for h in (1, 2):
            composed = composed * round_function(rounds[h], c.round_key(k, h))
        assert encryption_table(c, k) == composed
        ct = encrypt(c, k, np.arange(sp.size))
        assert decrypt(c, k, ct).tolist() == list(range(sp.size))


def test_linear_sbox():
    f = linear_sbox(np.array([[0, 1], [1, 1]]), 2)
    assert f.table == (0, 2, 3, 1)


def test_json_roundtrip_byte_identical():
    rng = np.random.default_rng(11)
    for sp in toy_spaces():
        c = random_toy_cipher(rng, sp)
        text = c.dumps()
        again = TbCipherSpec.loads(text)
        assert again.dumps() == text
        assert encryption_table(again, 5) == encryption_table(c, 5)


def test_json_flat_layer_and_errors():
    sp = VSpace(F2, 2, 2)
    doc = one_round(sp, (identity_sbox(4),) * 2, swap_layer(sp)).to_dict()
    flat = dict(doc, rounds=[dict(doc["rounds"][0], layer=sum(doc["rounds"][0]["layer"], []))])
    assert TbCipherSpec.from_dict(flat).dumps() == json.dumps(doc, sort_keys=True)
    with pytest.raises(ValueError, match="malformed"):
        TbCipherSpec.from_dict({"field": "2", "m": 2})
