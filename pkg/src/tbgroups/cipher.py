"""Translation-based ciphers: bricklayers, mixing layers, round keys.

A round maps ``v -> (v gamma) lambda + k``.  Everything is materialised as
full tables over the point encoding of :mod:`tbgroups.algebra`.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .algebra import FieldSpec, VSpace, ff_inv, rref
from .group_engine import Permutation


@dataclass(frozen=True, eq=False)
class SBox:
    """A permutation of F_p^{m_p} given as a table of point indices.

    Bricks of a cipher must fix 0; the analysis functions accept any
    bijection.
    """

    table: tuple[int, ...]
    p: int = 2

    def __post_init__(self):
        t = tuple(int(x) for x in self.table)
        object.__setattr__(self, "table", t)
        if sorted(t) != list(range(len(t))):
            raise ValueError("S-box table is not a bijection")
        m_p, size = 0, 1
        while size < len(t):
            size *= self.p
            m_p += 1
        if size != len(t):
            raise ValueError(f"S-box length {len(t)} is not a power of {self.p}")
        object.__setattr__(self, "m_p", m_p)

    def __eq__(self, other):
        return isinstance(other, SBox) and (self.table, self.p) == (other.table, other.p)

    def __hash__(self):
        return hash((self.table, self.p))

    @property
    def size(self) -> int:
        return len(self.table)

    @property
    def fixes_zero(self) -> bool:
        return self.table[0] == 0

    def array(self) -> np.ndarray:
        return np.asarray(self.table, dtype=np.int64)


def identity_sbox(size: int, p: int = 2) -> SBox:
    return SBox(tuple(range(size)), p)


def inversion_sbox(fs: FieldSpec) -> SBox:
    """x -> x^{-1} on F_q (0 -> 0), indexed by the little-endian coefficient encoding."""
    table = [0] * fs.q
    for i in range(1, fs.q):
        table[i] = fs.index(ff_inv(fs.element(i), fs))
    return SBox(tuple(table), fs.p)


def linear_sbox(matrix: np.ndarray, p: int) -> SBox:
    """The additive permutation x -> x M of F_p^k."""
    k = matrix.shape[0]
    pts = np.arange(p**k)
    digits = (pts[:, None] // p ** np.arange(k)) % p
    return SBox(tuple(int(x) for x in (digits @ matrix % p) @ p ** np.arange(k)), p)


def random_sbox(rng: np.random.Generator, size: int, p: int = 2) -> SBox:
    """Uniform random permutation fixing 0."""
    rest = rng.permutation(np.arange(1, size))
    return SBox((0, *rest.tolist()), p)


@dataclass(frozen=True, eq=False)
class MixingLayer:
    """An invertible d x d matrix over F_q (entries are field indices), v -> v M."""

    space: VSpace
    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        mat = tuple(tuple(int(x) for x in row) for row in self.matrix)
        object.__setattr__(self, "matrix", mat)
        fs = self.space.field
        fp = self.space.fp_matrix([[fs.element(x) for x in row] for row in mat])
        if len(rref(fp, self.space.p)) != self.space.e:
            raise ValueError("mixing layer is not invertible")
        object.__setattr__(self, "fp", fp)

    def __eq__(self, other):
        return isinstance(other, MixingLayer) and (self.space, self.matrix) == (other.space, other.matrix)

    def __hash__(self):
        return hash((self.space, self.matrix))

    def apply(self, points) -> np.ndarray:
        return self.space.apply_fp_matrix(points, self.fp)

    def table(self) -> np.ndarray:
        return self.apply(np.arange(self.space.size))

    def inverse_table(self) -> np.ndarray:
        t = self.table()
        inv = np.empty_like(t)
        inv[t] = np.arange(t.size)
        return inv


def identity_layer(space: VSpace) -> MixingLayer:
    d = space.d
    one = space.field.index(space.field.one)
    return MixingLayer(space, tuple(tuple(one if i == j else 0 for j in range(d)) for i in range(d)))


def brick_permutation_layer(space: VSpace, perm: Sequence[int]) -> MixingLayer:
    """Send brick i to brick perm[i], coordinatewise."""
    m, d = space.m, space.d
    one = space.field.index(space.field.one)
    rows = [[0] * d for _ in range(d)]
    for i, j in enumerate(perm):
        for t in range(m):
            rows[i * m + t][j * m + t] = one
    return MixingLayer(space, tuple(map(tuple, rows)))


def swap_layer(space: VSpace) -> MixingLayer:
    """Cyclic shift of the bricks; for n = 2 this swaps V_1 and V_2."""
    n = space.n
    return brick_permutation_layer(space, [(i + 1) % n for i in range(n)])


def random_layer(space: VSpace, rng: np.random.Generator) -> MixingLayer:
    q, d = space.field.q, space.d
    while True:
        mat = rng.integers(0, q, size=(d, d))
        try:
            return MixingLayer(space, tuple(map(tuple, mat.tolist())))
        except ValueError:
            continue


@dataclass(frozen=True)
class RoundSpec:
    bricks: tuple[SBox, ...]
    layer: MixingLayer
    proper: bool = True

    def __post_init__(self):
        object.__setattr__(self, "bricks", tuple(self.bricks))
        space = self.layer.space
        if len(self.bricks) != space.n:
            raise ValueError(f"round has {len(self.bricks)} bricks, space has {space.n}")
        for b in self.bricks:
            if b.size != space.brick_size or b.p != space.p:
                raise ValueError(f"brick of size {b.size} does not fit bricks of size {space.brick_size}")
            if not b.fixes_zero:
                raise ValueError("cipher bricks must fix 0")


@dataclass(frozen=True, eq=False)
class TbCipherSpec:
    """Rounds plus an optional explicit key schedule ``key_schedule[k][h]``.

    Without a table the master key space is V itself and every round key
    equals the master key, so every round's key map is surjective.
    """

    space: VSpace
    rounds: tuple[RoundSpec, ...]
    key_schedule: np.ndarray | None = None
    budget: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "rounds", tuple(self.rounds))
        if not self.rounds:
            raise ValueError("a cipher needs at least one round")
        if self.key_schedule is not None:
            ks = np.asarray(self.key_schedule, dtype=np.int64)
            if ks.ndim != 2 or ks.shape[1] != len(self.rounds):
                raise ValueError("key_schedule must be a (keys x rounds) table")
            if ks.min() < 0 or ks.max() >= self.space.size:
                raise ValueError("round key out of range")
            object.__setattr__(self, "key_schedule", ks)
            for h, r in enumerate(self.rounds):
                if r.proper and np.unique(ks[:, h]).size != self.space.size:
                    raise ValueError(f"round {h} is flagged proper but its round keys do not cover V")
        if not any(r.proper for r in self.rounds):
            raise ValueError("no proper round: a tb cipher needs a round whose round keys "
                             "range over all of V (and whose mixing layer is proper)")

    @property
    def num_keys(self) -> int:
        return self.space.size if self.key_schedule is None else len(self.key_schedule)

    def round_key(self, k: int, h: int) -> int:
        if not 0 <= k < self.num_keys:
            raise KeyError(f"unknown master key {k}")
        return k if self.key_schedule is None else int(self.key_schedule[k, h])

    def proper_round(self) -> int:
        return next(h for h, r in enumerate(self.rounds) if r.proper)

    # -- JSON ---------------------------------------------------------------

    def to_dict(self) -> dict:
        out = {
            "field": str(self.space.field),
            "m": self.space.m,
            "n": self.space.n,
            "rounds": [{"bricks": [list(b.table) for b in r.bricks],
                        "layer": [list(row) for row in r.layer.matrix],
                        "proper": r.proper} for r in self.rounds],
        }
        if self.key_schedule is not None:
            out["key_schedule"] = self.key_schedule.tolist()
        if self.budget:
            out["budget"] = dict(self.budget)
        return out

    @classmethod
    def from_dict(cls, doc: dict) -> "TbCipherSpec":
        try:
            space = VSpace(FieldSpec.parse(doc["field"]), int(doc["m"]), int(doc["n"]))
            rounds = []
            for r in doc["rounds"]:
                layer = r["layer"]
                if layer and not isinstance(layer[0], list):
                    d = space.d
                    layer = [layer[i * d:(i + 1) * d] for i in range(d)]
                rounds.append(RoundSpec(tuple(SBox(tuple(b), space.p) for b in r["bricks"]),
                                        MixingLayer(space, tuple(map(tuple, layer))),
                                        bool(r.get("proper", False))))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed cipher spec: {exc!r}") from None
        ks = doc.get("key_schedule")
        return cls(space, tuple(rounds), None if ks is None else np.asarray(ks), dict(doc.get("budget", {})))

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def loads(cls, text: str) -> "TbCipherSpec":
        return cls.from_dict(json.loads(text))


def apply_bricklayer(bricks: Sequence[SBox], v, space: VSpace):
    """Apply brick i to the i-th projection of ``v`` (point or array of points)."""
    if len(bricks) != space.n or any(b.size != space.brick_size for b in bricks):
        raise ValueError("bricks do not match the space")
    v = np.asarray(v, dtype=np.int64)
    if v.size and (v.min() < 0 or v.max() >= space.size):
        raise ValueError("point out of range")
    parts = [b.array()[space.brick_of(v, i)] for i, b in enumerate(bricks)]
    out = space.from_bricks(parts)
    return int(out) if out.ndim == 0 else out


def bricklayer_table(bricks: Sequence[SBox], space: VSpace) -> np.ndarray:
    return apply_bricklayer(bricks, np.arange(space.size), space)


def gamma_lambda(r: RoundSpec) -> Permutation:
    space = r.layer.space
    return Permutation(r.layer.apply(bricklayer_table(r.bricks, space)), check=False)


def translation(space: VSpace, k: int) -> Permutation:
    return Permutation(space.add(np.arange(space.size), k), check=False)


def round_function(r: RoundSpec, k: int) -> Permutation:
    space = r.layer.space
    return Permutation(space.add(gamma_lambda(r).table.astype(np.int64), k), check=False)


def group_generators(c: TbCipherSpec, scope="all") -> list[Permutation]:
    """Generators of Gamma_h (``scope`` = round index h) or Gamma_inf (``"all"``).

    The basis translations generate T(V), so one key-free map per round
    plus the e translations suffice.
    """
    if scope == "all":
        rhos = [gamma_lambda(r) for r in c.rounds]
    else:
        r = c.rounds[scope]
        if not r.proper:
            raise ValueError(f"round {scope} is not proper: Gamma_h = <rho, T(V)> needs the "
                             "round keys of that round to cover V")
        rhos = [gamma_lambda(r)]
    return rhos + [translation(c.space, b) for b in c.space.basis_points()]


def encrypt(c: TbCipherSpec, k: int, v):
    out = np.asarray(v, dtype=np.int64)
    for h, r in enumerate(c.rounds):
        out = round_function(r, c.round_key(k, h)).table[out].astype(np.int64)
    return int(out) if out.ndim == 0 else out


def decrypt(c: TbCipherSpec, k: int, v):
    out = np.asarray(v, dtype=np.int64)
    for h in reversed(range(len(c.rounds))):
        out = round_function(c.rounds[h], c.round_key(k, h)).inverse().table[out].astype(np.int64)
    return int(out) if out.ndim == 0 else out


def encryption_table(c: TbCipherSpec, k: int) -> Permutation:
    return Permutation(encrypt(c, k, np.arange(c.space.size)), check=False)
