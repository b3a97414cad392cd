"""Brick criteria: weak uniformity, strong anti-invariance, and the coset condition.

A brick is treated as a permutation of A = F_p^{m_p}, where m_p is the
brick's dimension over the prime field.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .algebra import SubgroupBasis, digits_of, encode_digits, rref, subgroup_basis_arrays
from .cipher import SBox

# subgroups scanned per numpy batch in check_anti_invariance
_CHUNK = 8192


class _Arith:
    """Point arithmetic in F_p^k on integer indices."""

    def __init__(self, p: int, k: int):
        self.p, self.k, self.size = p, k, p**k
        self.digits = digits_of(np.arange(self.size), p, k)

    def add(self, x, y):
        if self.p == 2:
            return np.bitwise_xor(x, y)
        return encode_digits((self.digits[x] + self.digits[y]) % self.p, self.p)

    def sub(self, x, y):
        if self.p == 2:
            return np.bitwise_xor(x, y)
        return encode_digits((self.digits[x] - self.digits[y]) % self.p, self.p)


def _arith(f: SBox) -> _Arith:
    return _Arith(f.p, f.m_p)


@dataclass(frozen=True)
class DifferenceImage:
    a: int
    image: frozenset

    @property
    def size(self) -> int:
        return len(self.image)


def difference_image(f: SBox, a: int) -> DifferenceImage:
    """Im of x -> f(x + a) - f(x) over all of A."""
    if not 0 < a < f.size:
        raise ValueError("shift a must be a nonzero point of the brick")
    ar = _arith(f)
    t = f.array()
    x = np.arange(f.size)
    return DifferenceImage(a, frozenset(ar.sub(t[ar.add(x, a)], t).tolist()))


def _image_sizes(f: SBox) -> np.ndarray:
    """sizes[a] = |Im(f_a)| for a = 1 .. size-1 (index 0 unused)."""
    ar, t, n = _arith(f), f.array(), f.size
    x = np.arange(n)
    sizes = np.zeros(n, dtype=np.int64)
    for a in range(1, n):
        d = np.sort(ar.sub(t[ar.add(x, a)], t))
        sizes[a] = 1 + np.count_nonzero(d[1:] != d[:-1])
    return sizes


@dataclass
class UniformityReport:
    delta: int
    min_image_size: int
    witness_a: int
    passes: bool
    bound: float

    def to_dict(self) -> dict:
        return {"delta": self.delta, "min_image": self.min_image_size,
                "bound": self.bound, "passes": self.passes, "witness": self.witness_a}


def check_weak_uniformity(f: SBox, delta: int) -> UniformityReport:
    """Every nonzero shift must have more than p^{m_p-1}/delta differences."""
    if f.m_p < 2:
        raise ValueError(f"weak uniformity needs m_p >= 2, got {f.m_p}")
    if delta < f.p:
        raise ValueError(f"delta must be >= p = {f.p}, got {delta}")
    sizes = _image_sizes(f)
    a = int(np.argmin(sizes[1:])) + 1  # smallest a attaining the minimum
    smallest = int(sizes[a])
    top = f.p ** (f.m_p - 1)
    return UniformityReport(delta, smallest, a, smallest * delta > top, top / delta)


@dataclass
class AntiInvarianceReport:
    r: int
    violations: list[tuple[SubgroupBasis, SubgroupBasis]] = field(default_factory=list)

    @property
    def passes(self) -> bool:
        return not self.violations

    def restrict(self, r: int, m_p: int) -> "AntiInvarianceReport":
        """The report for a smaller r, read off from this one."""
        if r > self.r:
            raise ValueError("can only restrict to smaller r")
        return AntiInvarianceReport(r, [(u, w) for u, w in self.violations if u.dim >= m_p - r])

    def to_dict(self, max_listed: int = 16) -> dict:
        return {"r": self.r, "passes": self.passes, "violation_count": len(self.violations),
                "violations": [{"U": u.row_points(), "W": w.row_points(), "dim": u.dim}
                               for u, w in self.violations[:max_listed]]}


def _closed_images(images: np.ndarray, ar: _Arith, k: int) -> np.ndarray:
    """Boolean per row: is the row's point set a subgroup (of order p**k)?"""
    rows, size = images.shape
    member = np.zeros((rows, ar.size), dtype=bool)
    member[np.arange(rows)[:, None], images] = True
    alive = member[:, 0].copy()  # a subgroup contains 0
    # cheap necessary checks on a few pairs prune almost everything
    probe = range(min(size, 4))
    for i in probe:
        for j in probe:
            idx = np.nonzero(alive)[0]
            if not idx.size:
                return alive
            s = ar.add(images[idx, i], images[idx, j])
            alive[idx] = member[idx, s]
    for b in np.nonzero(alive)[0]:
        alive[b] = len(rref(ar.digits[images[b]], ar.p)) == k
    return alive


def check_anti_invariance(f: SBox, r: int, budget_bits: float = 16) -> AntiInvarianceReport:
    """Find subgroups U with p^{m_p-r} <= |U| < p^{m_p} whose image f(U) is a subgroup.

    f is a bijection, so an image that is closed under addition is a
    subgroup W with |W| = |U|.
    """
    m_p, p = f.m_p, f.p
    if not 1 <= r < m_p:
        raise ValueError(f"need 1 <= r < m_p = {m_p}, got r={r}")
    if m_p * math.log2(p) > budget_bits:
        raise ValueError(f"enumeration too large: subgroups of F_{p}^{m_p} exceed the 2^{budget_bits} budget")
    ar, t = _arith(f), f.array()
    weights = p ** np.arange(m_p, dtype=np.int64)
    report = AntiInvarianceReport(r)
    for k in range(m_p - r, m_p):
        coeffs = digits_of(np.arange(p**k), p, k)  # (p^k, k)
        pending = []
        for bases in subgroup_basis_arrays(m_p, p, k):
            pending.append(bases)
            if sum(len(b) for b in pending) >= _CHUNK:
                _scan_chunk(np.concatenate(pending), coeffs, t, ar, weights, k, report)
                pending = []
        if pending:
            _scan_chunk(np.concatenate(pending), coeffs, t, ar, weights, k, report)
    return report


def _scan_chunk(bases, coeffs, t, ar, weights, k, report):
    p = ar.p
    elems = np.einsum("sk,bke->bse", coeffs, bases) % p @ weights  # (B, p^k) points
    images = t[elems]
    for b in np.nonzero(_closed_images(images, ar, k))[0]:
        u = SubgroupBasis(p, ar.k, tuple(map(tuple, bases[b].tolist())))
        w_rows = rref(ar.digits[images[b]], p)
        w = SubgroupBasis(p, ar.k, tuple(tuple(int(x) for x in row) for row in w_rows))
        report.violations.append((u, w))


@dataclass
class CosetReport:
    passes: bool
    witness_a: int | None = None

    def to_dict(self) -> dict:
        return {"passes": self.passes, "witness": self.witness_a}


def _is_coset(points: np.ndarray, ar: _Arith) -> bool:
    size = len(points)
    k = round(math.log(size, ar.p))
    if ar.p**k != size:
        return False
    shifted = np.asarray(ar.sub(points, points[0]))
    return len(rref(ar.digits[shifted], ar.p)) == k


def check_coset_condition(f: SBox) -> CosetReport:
    """Pass iff no difference image Im(f_a), a != 0, is a coset of a subgroup."""
    ar = _arith(f)
    for a in range(1, f.size):
        img = np.array(sorted(difference_image(f, a).image))
        if _is_coset(img, ar):
            return CosetReport(False, a)
    return CosetReport(True)


def min_subgroup_order_bound(f: SBox, r: int, w: SubgroupBasis, a_range) -> bool:
    """Check the size consequence of weak p^r-uniformity on one instance.

    If every Im(f_a), a in ``a_range`` nonzero, lies in ``w`` then
    |w| >= p^{m_p-r} must hold.  Returns False exactly when containment
    holds but the bound fails (possible only if f is not weakly
    p^r-uniform).
    """
    pts = a_range.points() if isinstance(a_range, SubgroupBasis) else np.asarray(list(a_range))
    shifts = [int(a) for a in pts if a]
    contained = all(all(x in w for x in difference_image(f, a).image) for a in shifts)
    return not contained or w.order >= f.p ** (f.m_p - r)
