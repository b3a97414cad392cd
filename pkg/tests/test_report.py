import math

import numpy as np
import pytest

from tbgroups.algebra import FieldSpec, VSpace
from tbgroups.cipher import (MixingLayer, RoundSpec, TbCipherSpec, group_generators, identity_layer,
                             identity_sbox, inversion_sbox)
from tbgroups.corpus import block_diagonal_layer, compliant_cipher, random_toy_cipher, toy_spaces
from tbgroups.report import analyze_sbox, group_report, admissible_r_values, verify_cipher

F2 = FieldSpec.prime(2)
F8 = FieldSpec.parse("2^3/1,1,0,1")


def inversion_cipher():
    sp = VSpace(F2, 3, 2)
    eye = np.eye(3, dtype=int)
    # [[I, I], [I, 0]] has no invariant brick sum
    layer = MixingLayer(sp, tuple(map(tuple, np.block([[eye, eye], [eye, 0 * eye]]).tolist())))
    inv = inversion_sbox(F8)
    return TbCipherSpec(sp, (RoundSpec((inv, inv), layer),))


def test_r_range():
    assert admissible_r_values(2) == [] and admissible_r_values(3) == [1]
    assert admissible_r_values(8) == [1, 2, 3]


def test_analyze_sbox_inversion():
    rep = analyze_sbox(inversion_sbox(F8))
    assert rep["summary"] == {"r": 1, "r_admissible": True, "uniformity_and_anti_invariance": True, "no_coset_images": False}
    assert rep["passes"] is False
    with pytest.raises(ValueError):
        analyze_sbox(inversion_sbox(F8), r=3)


def test_verdict_identity_cipher():
    sp = VSpace(F2, 2, 2)
    rep = verify_cipher(TbCipherSpec(sp, (RoundSpec((identity_sbox(4),) * 2, identity_layer(sp)),)))
    assert rep["verdict"] == "Imprimitive" and not rep["all_checks_pass"]
    assert rep["imprimitivity_agrees"] and "theorem_counterexample" not in rep


def test_verdict_inversion_cipher():
    rep = verify_cipher(inversion_cipher())
    gh = rep["group_report"]["gamma_h"]
    assert gh["class"] == "Alt" and int(gh["order"]) == math.factorial(64) // 2
    # condition (2) fails for the inversion brick, primitivity hypotheses hold
    assert rep["verdict"] == "PrimitiveOnly"
    assert rep["imprimitivity"] == {"found": False}


def test_verdict_compliant_cipher():
    rng = np.random.default_rng(2)
    c = compliant_cipher(rng, VSpace(F2, 4, 2))
    rep = verify_cipher(c)
    assert rep["verdict"] == "TheoremMainSatisfied" and rep["all_checks_pass"]
    names = [h["name"] for h in rep["hypotheses"]]
    assert names.count("weak_uniformity") == names.count("strong_anti_invariance") == 2
    assert names.count("coset_condition") == 2
    assert {"proper_mixing_layer", "r_admissible", "proper_round_declared"} <= set(names)


def test_verdict_block_diagonal():
    rng = np.random.default_rng(3)
    c = compliant_cipher(rng, VSpace(F2, 4, 2))
    bad = TbCipherSpec(c.space, (RoundSpec(c.rounds[0].bricks, block_diagonal_layer(c.space, rng)),))
    rep = verify_cipher(bad)
    assert rep["verdict"] == "HypothesesFail"
    assert rep["group_report"]["gamma_h"]["primitive"] is False


def test_gamma_inf_reported_for_several_rounds():
    rng = np.random.default_rng(4)
    sp = VSpace(F2, 2, 2)
    a, b = random_toy_cipher(rng, sp), random_toy_cipher(rng, sp)
    c = TbCipherSpec(sp, (a.rounds[0], b.rounds[0]))
    rep = verify_cipher(c)
    assert set(rep["group_report"]) == {"gamma_h", "gamma_inf"}
    assert int(rep["group_report"]["gamma_inf"]["order"]) % int(rep["group_report"]["gamma_h"]["order"]) == 0


def test_group_methods_agree():
    rng = np.random.default_rng(5)
    for sp in toy_spaces():
        if sp.size > 81:
            continue
        for _ in range(4):
            gens = group_generators(random_toy_cipher(rng, sp), 0)
            auto, _, _ = group_report(gens, sp)
            full, _, _ = group_report(gens, sp, method="bsgs")
            assert full["order_method"] == "bsgs"
            for key in ("order", "class", "primitive", "transitive"):
                assert auto[key] == full[key]
