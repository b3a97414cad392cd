"""Seeded generators of toy ciphers for property runs and the acceptance suite."""
from __future__ import annotations

import numpy as np

from .algebra import FieldSpec, VSpace, rref
from .cipher import (MixingLayer, RoundSpec, SBox, TbCipherSpec, identity_layer,
                     identity_sbox, linear_sbox, random_layer, random_sbox)
from .mixing_analysis import is_proper_mixing_layer
from .sbox_analysis import check_anti_invariance, check_weak_uniformity

DEFAULT_SEED = 20130722

BRICK_KINDS = ("random", "linear", "identity")
LAYER_KINDS = ("random", "proper", "identity", "block_diagonal")


def random_linear_sbox(rng: np.random.Generator, p: int, k: int) -> SBox:
    while True:
        m = rng.integers(0, p, size=(k, k))
        if len(rref(m, p)) == k:
            return linear_sbox(m, p)


def proper_layer(space: VSpace, rng: np.random.Generator, tries: int = 1000) -> MixingLayer:
    for _ in range(tries):
        layer = random_layer(space, rng)
        if is_proper_mixing_layer(layer).proper:
            return layer
    raise RuntimeError("no proper layer found")


def block_diagonal_layer(space: VSpace, rng: np.random.Generator) -> MixingLayer:
    q, m, d = space.field.q, space.m, space.d
    while True:
        mat = np.zeros((d, d), dtype=np.int64)
        for i in range(space.n):
            mat[i * m:(i + 1) * m, i * m:(i + 1) * m] = rng.integers(0, q, size=(m, m))
        try:
            return MixingLayer(space, tuple(map(tuple, mat.tolist())))
        except ValueError:
            continue


def make_brick(kind: str, rng, space: VSpace) -> SBox:
    p, size = space.p, space.brick_size
    if kind == "random":
        return random_sbox(rng, size, p)
    if kind == "linear":
        return random_linear_sbox(rng, p, space.m_p)
    if kind == "identity":
        return identity_sbox(size, p)
    raise ValueError(kind)


def make_layer(kind: str, rng, space: VSpace) -> MixingLayer:
    if kind == "random":
        return random_layer(space, rng)
    if kind == "proper":
        return proper_layer(space, rng)
    if kind == "identity":
        return identity_layer(space)
    if kind == "block_diagonal":
        return block_diagonal_layer(space, rng)
    raise ValueError(kind)


def random_toy_cipher(rng: np.random.Generator, space: VSpace, brick_kind: str | None = None,
                      layer_kind: str | None = None) -> TbCipherSpec:
    """One-round cipher with every brick of ``brick_kind`` (drawn at random if None)."""
    bk = brick_kind or str(rng.choice(BRICK_KINDS, p=[0.6, 0.25, 0.15]))
    lk = layer_kind or str(rng.choice(LAYER_KINDS, p=[0.35, 0.35, 0.1, 0.2]))
    bricks = tuple(make_brick(bk, rng, space) for _ in range(space.n))
    return TbCipherSpec(space, (RoundSpec(bricks, make_layer(lk, rng, space), True),))


def compliant_sbox(rng: np.random.Generator, p: int, m_p: int, r: int, tries: int = 10000) -> SBox:
    """Rejection-sample a 0-fixing S-box that is weakly p^r-uniform and strongly r-anti-invariant."""
    for _ in range(tries):
        f = random_sbox(rng, p**m_p, p)
        if check_weak_uniformity(f, p**r).passes and check_anti_invariance(f, r).passes:
            return f
    raise RuntimeError(f"no compliant S-box found for p={p}, m_p={m_p}, r={r}")


def compliant_cipher(rng: np.random.Generator, space: VSpace, r: int = 1) -> TbCipherSpec:
    bricks = tuple(compliant_sbox(rng, space.p, space.m_p, r) for _ in range(space.n))
    return TbCipherSpec(space, (RoundSpec(bricks, proper_layer(space, rng), True),))


def toy_spaces() -> list[VSpace]:
    """Spaces with p in {2, 3} and e <= 8 (|V| <= 729)."""
    f2, f3 = FieldSpec.prime(2), FieldSpec.prime(3)
    f4 = FieldSpec.parse("2^2/1,1,1")
    return [VSpace(f2, 2, 2), VSpace(f2, 3, 2), VSpace(f2, 2, 3), VSpace(f2, 4, 2),
            VSpace(f2, 2, 4), VSpace(f4, 2, 2), VSpace(f3, 2, 2), VSpace(f3, 3, 2), VSpace(f3, 2, 3)]
