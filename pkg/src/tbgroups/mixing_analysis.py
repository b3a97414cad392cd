"""Checks on the linear layer and the direct search for imprimitivity witnesses.

A witness is a proper nontrivial subgroup W of V with

    (u + v)gamma - v gamma  in  W lambda^{-1}    for all u in W, v in V,

which for a round with surjective round keys is the same as the cosets of
W forming a block system of <rho, T(V)>.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .algebra import SubgroupBasis, VSpace, gaussian_binomial, rref, subgroup_basis_arrays
from .cipher import MixingLayer, bricklayer_table

MAX_BRICKS = 24


class BudgetExceeded(ValueError):
    pass


@dataclass
class MixingReport:
    proper: bool
    invariant_subset: tuple[int, ...] | None = None  # 1-based brick indices

    def to_dict(self) -> dict:
        return {"proper_layer": self.proper,
                "invariant_subset": list(self.invariant_subset) if self.invariant_subset else []}


def is_proper_mixing_layer(layer: MixingLayer, space: VSpace | None = None) -> MixingReport:
    """Look for a nonempty proper brick subset I with (sum V_i, i in I) lambda = itself."""
    space = space or layer.space
    n, mp = space.n, space.m_p
    if n > MAX_BRICKS:
        raise BudgetExceeded(f"n = {n} bricks exceeds the subset-scan budget of {MAX_BRICKS}")
    # rows of the F_p matrix are images of the F_p basis vectors; brick i owns rows i*mp..
    fp = layer.fp % space.p
    support = [fp[i * mp:(i + 1) * mp].reshape(mp, n, mp).any(axis=(0, 2)) for i in range(n)]
    for size in range(1, n):
        for subset in itertools.combinations(range(n), size):
            inside = np.zeros(n, dtype=bool)
            inside[list(subset)] = True
            # a linear bijection maps a subspace into itself iff onto itself
            if all(not support[i][~inside].any() for i in subset):
                return MixingReport(False, tuple(i + 1 for i in subset))
    return MixingReport(True)


@dataclass
class ImprimitivityWitness:
    W: SubgroupBasis
    verified: bool

    def to_dict(self) -> dict:
        return {"found": True, "W_basis": self.W.row_points(), "dim": self.W.dim,
                "verified": self.verified}


def _span(vectors: np.ndarray, p: int) -> np.ndarray:
    return rref(vectors, p) if len(vectors) else np.zeros((0, vectors.shape[1]), dtype=np.int64)


def _in_span(basis: np.ndarray, vecs: np.ndarray, p: int) -> bool:
    return len(_span(np.vstack([basis, vecs]), p)) == len(basis)


def _differences(gam: np.ndarray, space: VSpace, u: int) -> np.ndarray:
    """All (u + v)gamma - v gamma as points."""
    v = np.arange(space.size)
    return np.asarray(space.sub(gam[space.add(v, u)], gam))


def verify_witness(W: SubgroupBasis, gam: np.ndarray, layer: MixingLayer, space: VSpace) -> bool:
    """Direct check of the defining condition for every u in W and v in V."""
    w_pts = set(W.points().tolist())
    for u in W.points():
        # (u+v)gamma - v gamma in W lambda^{-1}  <=>  its image under lambda lies in W
        img = layer.apply(_differences(gam, space, int(u)))
        if not set(img.tolist()) <= w_pts:
            return False
    return True


def find_imprimitivity_witness(bricks, layer: MixingLayer, space: VSpace | None = None,
                               method: str = "closure", budget_bits: float = 10,
                               max_subgroups: int = 10**6) -> ImprimitivityWitness | None:
    """First witness W in (dimension, echelon) order, or None.

    ``method="enumerate"`` walks every subgroup in canonical order and tests
    the condition on a basis of W (the condition is additive in u).
    ``method="closure"`` grows, for each nonzero u, the smallest subgroup
    W_u containing u that satisfies the condition; every witness contains
    W_u for each of its elements, so the least-dimension witnesses are
    exactly the least-dimension proper W_u, and both methods agree.
    """
    space = space or layer.space
    gam = bricklayer_table(bricks, space) if not isinstance(bricks, np.ndarray) else bricks
    if method == "enumerate":
        return _search_enumerate(gam, layer, space, budget_bits, max_subgroups)
    if method == "closure":
        return _search_closure(gam, layer, space)
    raise ValueError(f"unknown method {method!r}")


def _difference_spans(gam, layer, space) -> np.ndarray:
    """spans[u] = RREF rows (zero padded to e) of the span of the lambda-images of differences at u."""
    e, p = space.e, space.p
    spans = np.zeros((space.size, e, e), dtype=np.int64)
    for u in range(1, space.size):
        rows = rref(space.digits[np.unique(layer.apply(_differences(gam, space, u)))], p)
        spans[u, :len(rows)] = rows
    return spans


def _search_enumerate(gam, layer, space, budget_bits, max_subgroups):
    p, e = space.p, space.e
    if space.size > 2**budget_bits:
        raise BudgetExceeded(f"|V| = {space.size} exceeds the subgroup-scan budget 2^{budget_bits}")
    total = sum(gaussian_binomial(e, k, p) for k in range(1, e))
    if total > max_subgroups:
        raise BudgetExceeded(f"{total} candidate subgroups exceed the budget of {max_subgroups}")
    spans = _difference_spans(gam, layer, space)
    weights = p ** np.arange(e)
    for k in range(1, e):
        for batch in subgroup_basis_arrays(e, p, k):
            pivots = [int(np.nonzero(row)[0][0]) for row in batch[0]]
            ok = np.ones(len(batch), dtype=bool)
            # x lies in an RREF subgroup iff it equals the combination of rows given by its pivot entries
            for i in range(k):
                vecs = spans[batch[:, i] @ weights]  # (B, e, e)
                recon = np.einsum("bjk,bke->bje", vecs[:, :, pivots], batch) % p
                ok &= (recon == vecs).all(axis=(1, 2))
            hit = np.nonzero(ok)[0]
            if hit.size:
                W = SubgroupBasis(p, e, tuple(map(tuple, batch[hit[0]].tolist())))
                return ImprimitivityWitness(W, verify_witness(W, gam, layer, space))
    return None


def _closure(u: int, gam, layer, space, diff_cache) -> np.ndarray:
    """RREF basis of the smallest W containing u with all differences of W inside W."""
    p, digits = space.p, space.digits
    weights = p ** np.arange(space.e)
    W = _span(digits[[u]], p)
    expanded = np.zeros((0, space.e), dtype=np.int64)
    # the condition is additive in u, so expanding any basis of W suffices
    while len(expanded) < len(W):
        row = next(r for r in W if not _in_span(expanded, r[None], p))
        pt = int(row @ weights)
        if pt not in diff_cache:
            diff_cache[pt] = np.unique(layer.apply(_differences(gam, space, pt)))
        expanded = _span(np.vstack([expanded, row]), p)
        W = _span(np.vstack([W, digits[diff_cache[pt]]]), p)
        if len(W) == space.e:
            break
    return W


def _search_closure(gam, layer, space):
    p, e = space.p, space.e
    diff_cache = {}
    best = None
    for u in range(1, space.size):
        digits = space.digits[u]
        if digits[np.nonzero(digits)[0][0]] != 1:
            continue  # W_u = W_{cu} for nonzero scalars c
        rows = _closure(u, gam, layer, space, diff_cache)
        if len(rows) == e:
            continue
        cand = SubgroupBasis(p, e, tuple(tuple(int(x) for x in r) for r in rows))
        if best is None or _order_key(cand) < _order_key(best):
            best = cand
    if best is None:
        return None
    return ImprimitivityWitness(best, verify_witness(best, gam, layer, space))


def _order_key(W: SubgroupBasis):
    """Position of W in the enumeration order of enumerate_subgroups."""
    pivots = tuple(next(i for i, x in enumerate(r) if x) for r in W.rows)
    free = tuple(W.rows[i][j] for i, piv in enumerate(pivots)
                 for j in range(piv + 1, W.ambient_e) if j not in pivots)
    return (W.dim, pivots, free)
