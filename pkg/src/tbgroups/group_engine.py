"""Permutation groups on V: exact orders, transitivity, blocks, Alt/Sym recognition.

Permutations are full int32 tables acting on the right, so ``(a * b)[x] ==
b[a[x]]``.  The stabilizer chain is built by deterministic incremental
Schreier-Sims with explicit transversals.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .algebra import SubgroupBasis, VSpace, rref

MAX_DEGREE = 2**16


class Permutation:
    """An immutable permutation of ``range(degree)``."""

    __slots__ = ("table",)

    def __init__(self, table, check: bool = True):
        t = np.ascontiguousarray(table, dtype=np.int32)
        if check:
            if t.ndim != 1 or not np.array_equal(np.sort(t), np.arange(t.size)):
                raise ValueError("table is not a bijection")
        t.setflags(write=False)
        self.table = t

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(np.arange(n), check=False)

    @classmethod
    def from_cycles(cls, n: int, *cycles: Sequence[int]) -> "Permutation":
        t = np.arange(n)
        for cyc in cycles:
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                t[a] = b
        return cls(t)

    @property
    def degree(self) -> int:
        return self.table.size

    def __call__(self, x):
        return self.table[x]

    def __mul__(self, other: "Permutation") -> "Permutation":
        """Apply self first, then other."""
        return Permutation(other.table[self.table], check=False)

    def __pow__(self, k: int) -> "Permutation":
        if k < 0:
            return self.inverse() ** -k
        out, base = Permutation.identity(self.degree), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def inverse(self) -> "Permutation":
        inv = np.empty_like(self.table)
        inv[self.table] = np.arange(self.degree, dtype=np.int32)
        return Permutation(inv, check=False)

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.table, np.arange(self.degree)))

    def cycles(self) -> list[list[int]]:
        seen = np.zeros(self.degree, dtype=bool)
        out = []
        for start in range(self.degree):
            if seen[start]:
                continue
            cyc, x = [], start
            while not seen[x]:
                seen[x] = True
                cyc.append(x)
                x = int(self.table[x])
            out.append(cyc)
        return out

    def parity(self) -> int:
        """0 for even permutations, 1 for odd."""
        return (self.degree - len(self.cycles())) % 2

    def order(self) -> int:
        return math.lcm(*(len(c) for c in self.cycles()))

    def tolist(self) -> list[int]:
        return self.table.tolist()

    def __eq__(self, other):
        return isinstance(other, Permutation) and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash(self.table.tobytes())

    def __repr__(self):
        cyc = [c for c in self.cycles() if len(c) > 1]
        body = "".join("(" + " ".join(map(str, c)) + ")" for c in cyc) or "()"
        return f"Permutation<{self.degree}>{body}"


def _as_tables(generators: Iterable) -> list[np.ndarray]:
    out = []
    for g in generators:
        t = g.table if isinstance(g, Permutation) else Permutation(g).table
        out.append(t)
    return out


def orbit(generators, point: int) -> np.ndarray:
    tables = _as_tables(generators)
    n = tables[0].size
    seen = np.zeros(n, dtype=bool)
    seen[point] = True
    frontier = np.array([point])
    while frontier.size:
        imgs = np.unique(np.concatenate([t[frontier] for t in tables]))
        frontier = imgs[~seen[imgs]]
        seen[frontier] = True
    return np.nonzero(seen)[0]


class GroupBSGS:
    """Base and strong generating set of the group generated by ``generators``.

    ``base`` may fix a prefix of the base (e.g. ``[0]`` so that level 1
    holds the stabilizer of point 0).
    """

    def __init__(self, generators: Sequence, base: Sequence[int] = ()):
        tables = _as_tables(generators)
        if not tables:
            raise ValueError("need at least one generator")
        n = tables[0].size
        if any(t.size != n for t in tables):
            raise ValueError("generators have different degrees")
        if n > MAX_DEGREE:
            raise ValueError(f"degree {n} exceeds the BSGS budget {MAX_DEGREE}")
        self.degree = n
        self.generators = [Permutation(t, check=False) for t in tables]
        self._ident = np.arange(n, dtype=np.int32)
        self.base: list[int] = []
        self.strong_gens: list[np.ndarray] = []
        self._level_gens: list[list[int]] = []
        self._orbits: list[list[int]] = []
        self._checked: list[tuple[int, int]] = []
        self._pos = np.full((8, n), -1, dtype=np.int32)
        self._fwd = np.empty((64, n), dtype=np.int32)
        self._inv = np.empty((64, n), dtype=np.int32)
        self._nrows = 0
        for b in base:
            self._add_level(int(b))
        self._build(tables)

    # -- storage ----------------------------------------------------------

    def _add_level(self, point: int):
        lev = len(self.base)
        if lev == self._pos.shape[0]:
            grown = np.full((2 * lev, self.degree), -1, dtype=np.int32)
            grown[:lev] = self._pos
            self._pos = grown
        self.base.append(point)
        self._level_gens.append([])
        self._orbits.append([])
        self._checked.append((0, 0))
        self._store_rep(lev, point, self._ident)

    def _store_rep(self, lev: int, point: int, rep: np.ndarray):
        if self._nrows == self._fwd.shape[0]:
            cap = 2 * self._nrows
            self._fwd = np.resize(self._fwd, (cap, self.degree))
            self._inv = np.resize(self._inv, (cap, self.degree))
        r = self._nrows
        self._fwd[r] = rep
        self._inv[r, rep] = self._ident
        self._pos[lev, point] = r
        self._orbits[lev].append(point)
        self._nrows += 1

    def _extend_orbit(self, lev: int, new_gens: Sequence[int]):
        """Grow the orbit of level ``lev`` after ``new_gens`` joined it."""
        orb, pos = self._orbits[lev], self._pos[lev]
        old = len(orb)
        gens = self._level_gens[lev]
        k = 0
        while k < len(orb):
            x = orb[k]
            for gi in (new_gens if k < old else gens):
                s = self.strong_gens[gi]
                y = int(s[x])
                if pos[y] < 0:
                    self._store_rep(lev, y, s[self._fwd[pos[x]]])
            k += 1

    def _add_strong_gen(self, h: np.ndarray, levels: range):
        idx = len(self.strong_gens)
        self.strong_gens.append(np.ascontiguousarray(h, dtype=np.int32))
        for lev in levels:
            self._level_gens[lev].append(idx)
            self._extend_orbit(lev, [idx])

    # -- Schreier-Sims ----------------------------------------------------

    def _first_level_moving(self, h: np.ndarray) -> int:
        for lev, b in enumerate(self.base):
            if h[b] != b:
                return lev
        return len(self.base)

    def _build(self, tables):
        seen = set()
        for t in tables:
            key = t.tobytes()
            if key in seen or np.array_equal(t, self._ident):
                continue
            seen.add(key)
            top = self._first_level_moving(t)
            if top == len(self.base):
                self._add_level(int(np.nonzero(t != self._ident)[0][0]))
            self._add_strong_gen(t, range(top + 1))

        k = kernels.backend
        lev = len(self.base) - 1
        while lev >= 0:
            gens = self._level_gens[lev]
            rows, ngen = self._checked[lev]
            found = None
            if gens:
                found = k.schreier_scan(
                    lev, np.asarray(self.base, dtype=np.int32), self._pos,
                    self._fwd, self._inv, np.asarray(self._orbits[lev], dtype=np.int32),
                    np.stack([self.strong_gens[i] for i in gens]), rows, ngen)
            if found is None:
                self._checked[lev] = (len(self._orbits[lev]), len(gens))
                lev -= 1
                continue
            h, drop = found
            if drop == len(self.base):
                self._add_level(int(np.nonzero(h != self._ident)[0][0]))
            self._add_strong_gen(h, range(lev + 1, drop + 1))
            lev = drop

    # -- queries ----------------------------------------------------------

    @property
    def orbit_lengths(self) -> list[int]:
        return [len(o) for o in self._orbits]

    @property
    def order(self) -> int:
        return math.prod(self.orbit_lengths)

    def sift(self, g) -> tuple[np.ndarray, int]:
        t = g.table if isinstance(g, Permutation) else np.asarray(g, dtype=np.int32)
        return kernels.backend.sift(t, np.asarray(self.base, dtype=np.int32),
                                    self._pos, self._inv, 0)

    def __contains__(self, g) -> bool:
        h, level = self.sift(g)
        return level == len(self.base) and bool(np.array_equal(h, self._ident))

    def stabilizer_generators(self, level: int) -> list[Permutation]:
        """Strong generators of the pointwise stabilizer of base[:level]."""
        if level == 0:
            return list(self.generators)
        if level >= len(self.base):
            return []
        return [Permutation(self.strong_gens[i], check=False) for i in self._level_gens[level]]


def bsgs(generators: Sequence, base: Sequence[int] = ()) -> GroupBSGS:
    return GroupBSGS(generators, base)


def is_transitive(g) -> bool:
    gens = g.generators if isinstance(g, GroupBSGS) else g
    tables = _as_tables(gens)
    return orbit(tables, 0).size == tables[0].size


@dataclass
class BlockSystem:
    block_size: int
    blocks: list[list[int]]
    as_subgroup: SubgroupBasis | None = None

    def cell_of(self, point: int) -> list[int]:
        return next(b for b in self.blocks if point in b)

    def to_dict(self) -> dict:
        out = {"block_size": self.block_size, "num_blocks": len(self.blocks),
               "block_of_0": self.cell_of(0)}
        if self.as_subgroup is not None:
            out["subgroup_basis"] = self.as_subgroup.row_points()
        return out


def _blocks_from_labels(labels: np.ndarray) -> BlockSystem:
    order = np.argsort(labels, kind="stable")
    _, starts = np.unique(labels[order], return_index=True)
    cells = [c.tolist() for c in np.split(order, starts[1:])]
    return BlockSystem(len(cells[0]), cells)


def _gen_array(generators) -> np.ndarray:
    return np.ascontiguousarray(np.stack(_as_tables(generators)), dtype=np.int32)


def minimal_block(generators, v: int, *, check_transitive: bool = True) -> BlockSystem | None:
    """Finest invariant partition joining 0 and ``v``; None when it is {V}."""
    if check_transitive and not is_transitive(generators):
        raise ValueError("minimal blocks need a transitive group")
    gens = _gen_array(generators)
    labels = kernels.backend.minimal_block(gens, 0, int(v))
    if not labels.any():
        return None
    return _blocks_from_labels(labels)


@dataclass
class PrimitivityResult:
    primitive: bool
    blocks: BlockSystem | None = None

    def __bool__(self):
        return self.primitive


def _has_basis_translations(tables: list[np.ndarray], space: VSpace) -> bool:
    keys = {t.tobytes() for t in tables}
    pts = np.arange(space.size)
    return all(np.asarray(space.add(pts, b), dtype=np.int32).tobytes() in keys
               for b in space.basis_points())


def is_primitive(generators, space: VSpace | None = None, group: GroupBSGS | None = None) -> PrimitivityResult:
    """Scan minimal blocks of {0, v} for v != 0.

    When ``group`` has base point 0 first, only one v per orbit of the
    stabilizer of 0 needs testing.  When ``space`` is given and the
    generators contain the basis translations, the cell of 0 is reported as
    a subgroup.
    """
    tables = _as_tables(generators)
    if not is_transitive(tables):
        raise ValueError("primitivity is only defined for transitive groups")
    n = tables[0].size
    if group is not None and group.base and group.base[0] == 0:
        stab = group.stabilizer_generators(1)
        if stab:
            candidates = _orbit_representatives(stab, n)
        else:
            candidates = range(1, n)
    else:
        candidates = range(1, n)
    gens = _gen_array(tables)
    for v in candidates:
        if v == 0:
            continue
        labels = kernels.backend.minimal_block(gens, 0, int(v))
        if labels.any():
            blocks = _blocks_from_labels(labels)
            if space is not None and _has_basis_translations(tables, space):
                cell = np.array(blocks.cell_of(0))
                if not _is_subgroup(cell, space):
                    raise AssertionError("block of 0 is not a subgroup although T(V) is present")
                rows = rref(space.digits[cell], space.p)
                blocks.as_subgroup = SubgroupBasis(space.p, space.e, tuple(tuple(map(int, r)) for r in rows))
            return PrimitivityResult(False, blocks)
    return PrimitivityResult(True)


def _orbit_representatives(generators, n: int) -> list[int]:
    tables = _as_tables(generators)
    seen = np.zeros(n, dtype=bool)
    reps = []
    for x in range(n):
        if not seen[x]:
            reps.append(x)
            seen[orbit(tables, x)] = True
    return reps


def _is_subgroup(points: np.ndarray, space: VSpace) -> bool:
    size = len(points)
    k = round(math.log(size, space.p))
    if space.p**k != size or 0 not in set(points.tolist()):
        return False
    return len(rref(space.digits[points], space.p)) == k


def classify_alt_sym(g: GroupBSGS) -> str:
    """'Sym', 'Alt' or 'ProperSubgroup' by exact order."""
    n, order = g.degree, g.order
    full = math.factorial(n)
    if order == full:
        return "Sym"
    if n > 1 and order == full // 2:
        # an odd generator would force order N!; the order is the ground truth
        assert not any(p.parity() for p in g.generators)
        return "Alt"
    return "ProperSubgroup"


def _is_prime(n: int) -> bool:
    return n > 1 and all(n % d for d in range(2, math.isqrt(n) + 1))


def _random_elements(tables: list[np.ndarray], rng: np.random.Generator, count: int, warmup: int = 40):
    """Product replacement with an accumulator; yields ``count`` group elements."""
    state = [tables[i % len(tables)].copy() for i in range(max(10, len(tables)))]
    acc = np.arange(tables[0].size, dtype=np.int32)
    for step in range(warmup + count):
        i, j = rng.choice(len(state), size=2, replace=False)
        state[i] = state[j][state[i]] if rng.random() < 0.5 else state[i][state[j]]
        acc = state[i][acc]
        if step >= warmup:
            yield acc


def jordan_cycle(generators, tries: int = 256, seed: int = 0) -> Permutation | None:
    """Search the group for a cycle of prime length l <= n - 3.

    A primitive group containing such a cycle contains Alt(n) (Jordan), so
    for a primitive group a hit fixes the order at n! or n!/2.
    """
    tables = _as_tables(generators)
    n = tables[0].size
    if n < 8:
        return None
    rng = np.random.default_rng(seed)
    for t in _random_elements(tables, rng, tries):
        g = Permutation(t, check=False)
        lengths = [len(c) for c in g.cycles()]
        for ell in sorted(set(lengths), reverse=True):
            if ell > n - 3 or not _is_prime(ell) or lengths.count(ell) != 1:
                continue
            others = [x for x in lengths if x != ell]
            if any(x % ell == 0 for x in others):
                continue
            cyc = g ** math.lcm(1, *others)
            assert sorted(len(c) for c in cyc.cycles() if len(c) > 1) == [ell]
            return cyc
    return None


def recognize_giant(generators, primitive: bool, tries: int = 256, seed: int = 0) -> str | None:
    """'Alt' or 'Sym' when a Jordan certificate exists; None if undecided.

    ``primitive`` must be the true primitivity of the group.
    """
    if not primitive or jordan_cycle(generators, tries, seed) is None:
        return None
    odd = any(Permutation(t, check=False).parity() for t in _as_tables(generators))
    return "Sym" if odd else "Alt"


def giant_order(n: int, cls: str) -> int:
    return math.factorial(n) // (1 if cls == "Sym" else 2)


def verify_block_coset_form(blocks: BlockSystem, space: VSpace) -> bool:
    """True iff the cell of 0 is a subgroup W and every cell is W + c."""
    cell0 = np.array(blocks.cell_of(0))
    if not _is_subgroup(cell0, space):
        return False
    w = set(cell0.tolist())
    for cell in blocks.blocks:
        c = cell[0]
        shifted = set(np.asarray(space.sub(np.array(cell), c)).tolist())
        if shifted != w:
            return False
    return True
