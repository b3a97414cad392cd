"""Translation-based ciphers over F_q and the permutation groups generated by their rounds."""
from .algebra import (EnumerationTooLarge, FieldElement, FieldSpec, SubgroupBasis, Vector, VSpace,
                      echelonize, enumerate_subgroups, ff_add, ff_inv, ff_mul, is_closed_under_addition)
from .cipher import (MixingLayer, RoundSpec, SBox, TbCipherSpec, apply_bricklayer, decrypt, encrypt,
                     gamma_lambda, group_generators, round_function)
from .group_engine import (BlockSystem, GroupBSGS, Permutation, bsgs, classify_alt_sym, is_primitive,
                           is_transitive, minimal_block, verify_block_coset_form)
from .mixing_analysis import find_imprimitivity_witness, is_proper_mixing_layer
from .sbox_analysis import (check_anti_invariance, check_coset_condition, check_weak_uniformity,
                            difference_image, min_subgroup_order_bound)

__version__ = "0.1.0"
