"""Finite fields F_q = F_p[x]/(pi), the message space V = F_q^d, and its subgroups.

Points of V are identified with integers in ``[0, p**e)`` by reading the
F_p coordinates of a vector little-endian, brick 1 first.  Every permutation
table in the package is indexed by this encoding.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

MAX_EXTENSION_DEGREE = 8
# trial division over all monic factors of degree <= f // 2 must stay small
_FACTOR_SEARCH_LIMIT = 10**6


class EnumerationTooLarge(ValueError):
    """Raised when an exhaustive enumeration would exceed its budget."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    return all(n % k for k in range(3, math.isqrt(n) + 1, 2))


# --- polynomials over F_p, coefficient lists low-to-high -------------------

def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mod(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    r = _trim([x % p for x in a])
    b = _trim([x % p for x in b])
    inv_lead = pow(b[-1], -1, p)
    while len(r) >= len(b):
        c = r[-1] * inv_lead % p
        shift = len(r) - len(b)
        for i, bc in enumerate(b):
            r[shift + i] = (r[shift + i] - c * bc) % p
        _trim(r)
    return r


def _is_irreducible(poly: Sequence[int], p: int) -> bool:
    f = len(poly) - 1
    if f == 1:
        return True
    if poly[0] % p == 0:
        return False
    if p ** (f // 2) > _FACTOR_SEARCH_LIMIT:
        raise ValueError(f"irreducibility search over F_{p} degree {f} exceeds desk-scale limit")
    for k in range(1, f // 2 + 1):
        for low in itertools.product(range(p), repeat=k):
            if not _poly_mod(poly, list(low) + [1], p):
                return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """F_q = F_p[x]/(poly) with q = p**f; ``poly`` is monic, low-to-high."""

    p: int
    f: int
    poly: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "poly", tuple(int(c) % self.p for c in self.poly))
        if not is_prime(self.p):
            raise ValueError(f"p={self.p} is not prime")
        if not 1 <= self.f <= MAX_EXTENSION_DEGREE:
            raise ValueError(f"extension degree must be in [1, {MAX_EXTENSION_DEGREE}], got {self.f}")
        if len(self.poly) != self.f + 1 or self.poly[-1] != 1:
            raise ValueError(f"poly must be monic of degree {self.f}")
        if not _is_irreducible(self.poly, self.p):
            raise ValueError(f"{self.poly} is reducible over F_{self.p}")

    @property
    def q(self) -> int:
        return self.p**self.f

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls(p, 1, (0, 1))

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        """Parse ``p^f/c0,c1,...,cf`` (or a bare prime ``p``)."""
        text = text.strip()
        try:
            if "/" not in text:
                if "^" in text:
                    raise ValueError("extension fields need an explicit polynomial")
                return cls.prime(int(text))
            head, poly = text.split("/", 1)
            p, _, f = head.partition("^")
            coeffs = tuple(int(c) for c in poly.split(","))
            return cls(int(p), int(f or 1), coeffs)
        except (TypeError, ValueError) as exc:
            raise ValueError(f"bad field spec {text!r}: {exc}") from None

    def __str__(self) -> str:
        return f"{self.p}^{self.f}/{','.join(map(str, self.poly))}"

    # element <-> index, little-endian base p
    def element(self, index: int) -> "FieldElement":
        if not 0 <= index < self.q:
            raise ValueError(f"field index {index} out of range")
        coeffs = []
        for _ in range(self.f):
            index, c = divmod(index, self.p)
            coeffs.append(c)
        return FieldElement(tuple(coeffs))

    def index(self, a: "FieldElement") -> int:
        return sum(c * self.p**i for i, c in enumerate(a.coeffs))

    def elements(self) -> Iterator["FieldElement"]:
        return (self.element(i) for i in range(self.q))

    @property
    def zero(self) -> "FieldElement":
        return FieldElement((0,) * self.f)

    @property
    def one(self) -> "FieldElement":
        return FieldElement((1,) + (0,) * (self.f - 1))


@dataclass(frozen=True)
class FieldElement:
    coeffs: tuple[int, ...]

    def is_zero(self) -> bool:
        return not any(self.coeffs)


def _check(a: FieldElement, spec: FieldSpec):
    if len(a.coeffs) != spec.f or any(not 0 <= c < spec.p for c in a.coeffs):
        raise ValueError(f"{a} is not a reduced element of F_{spec.q}")


def ff_add(a: FieldElement, b: FieldElement, spec: FieldSpec) -> FieldElement:
    return FieldElement(tuple((x + y) % spec.p for x, y in zip(a.coeffs, b.coeffs)))


def ff_sub(a: FieldElement, b: FieldElement, spec: FieldSpec) -> FieldElement:
    return FieldElement(tuple((x - y) % spec.p for x, y in zip(a.coeffs, b.coeffs)))


def ff_mul(a: FieldElement, b: FieldElement, spec: FieldSpec) -> FieldElement:
    _check(a, spec)
    _check(b, spec)
    p, f = spec.p, spec.f
    prod = [0] * (2 * f - 1)
    for i, x in enumerate(a.coeffs):
        if x:
            for j, y in enumerate(b.coeffs):
                prod[i + j] += x * y
    r = _poly_mod(prod, spec.poly, p)
    return FieldElement(tuple(r + [0] * (f - len(r))))


def ff_inv(a: FieldElement, spec: FieldSpec) -> FieldElement:
    if a.is_zero():
        raise ZeroDivisionError("zero has no inverse")
    # a^(q-2) by square and multiply
    result, base, k = spec.one, a, spec.q - 2
    while k:
        if k & 1:
            result = ff_mul(result, base, spec)
        base = ff_mul(base, base, spec)
        k >>= 1
    return result


# --- linear algebra over F_p -----------------------------------------------

def rref(mat: np.ndarray, p: int) -> np.ndarray:
    """Reduced row-echelon form mod p; zero rows dropped.

    Pivots are taken at the lowest coordinate index first.
    """
    a = np.array(mat, dtype=np.int64) % p
    if a.ndim != 2:
        raise ValueError("expected a 2-d array")
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            a[[r, k]] = a[[k, r]]
        a[r] = a[r] * pow(int(a[r, c]), -1, p) % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            a[hit] = (a[hit] - np.outer(col[hit], a[r])) % p
        r += 1
    return a[:r]


@dataclass(frozen=True)
class SubgroupBasis:
    """An F_p-subspace of F_p^e held by its reduced row-echelon basis."""

    p: int
    ambient_e: int
    rows: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def order(self) -> int:
        return self.p**self.dim

    @cached_property
    def _pivots(self) -> tuple[int, ...]:
        return tuple(next(i for i, x in enumerate(r) if x) for r in self.rows)

    def reduce(self, vec: Sequence[int]) -> tuple[int, ...]:
        v = [x % self.p for x in vec]
        for row, piv in zip(self.rows, self._pivots):
            c = v[piv]
            if c:
                v = [(x - c * y) % self.p for x, y in zip(v, row)]
        return tuple(v)

    def __contains__(self, vec) -> bool:
        if isinstance(vec, (int, np.integer)):
            vec = point_digits(int(vec), self.p, self.ambient_e)
        return not any(self.reduce(vec))

    def elements(self) -> np.ndarray:
        """All p**dim members as an (p**dim, e) digit array."""
        if not self.rows:
            return np.zeros((1, self.ambient_e), dtype=np.int64)
        coeffs = np.array(list(itertools.product(range(self.p), repeat=self.dim)), dtype=np.int64)
        return coeffs @ np.array(self.rows, dtype=np.int64) % self.p

    def points(self) -> np.ndarray:
        return encode_digits(self.elements(), self.p)

    def row_points(self) -> list[int]:
        return [int(encode_digits(np.array(r), self.p)) for r in self.rows]


def point_digits(x: int, p: int, e: int) -> tuple[int, ...]:
    out = []
    for _ in range(e):
        x, c = divmod(x, p)
        out.append(c)
    return tuple(out)


def encode_digits(digits: np.ndarray, p: int) -> np.ndarray:
    digits = np.asarray(digits, dtype=np.int64)
    weights = p ** np.arange(digits.shape[-1], dtype=np.int64)
    return digits @ weights


def digits_of(points, p: int, e: int) -> np.ndarray:
    pts = np.asarray(points, dtype=np.int64)
    return (pts[..., None] // (p ** np.arange(e, dtype=np.int64))) % p


def echelonize(vectors: Iterable[Sequence[int]], e: int, p: int = 2) -> SubgroupBasis:
    vecs = [tuple(int(x) for x in v) for v in vectors]
    for v in vecs:
        if len(v) != e:
            raise ValueError(f"vector {v} has length {len(v)}, expected {e}")
    if not vecs:
        return SubgroupBasis(p, e, ())
    rows = rref(np.array(vecs, dtype=np.int64), p)
    return SubgroupBasis(p, e, tuple(tuple(int(x) for x in r) for r in rows))


def gaussian_binomial(e: int, k: int, p: int) -> int:
    num = den = 1
    for i in range(k):
        num *= p ** (e - i) - 1
        den *= p ** (i + 1) - 1
    return num // den


def enumerate_subgroups(e: int, p: int, min_dim: int = 0, max_dim: int | None = None,
                        budget_bits: float = 16) -> Iterator[SubgroupBasis]:
    """Yield every subgroup of F_p^e with dimension in [min_dim, max_dim].

    Order: by dimension, then pivot set (lexicographic), then free entries
    in little-endian product order.  Each subgroup appears exactly once.
    """
    if max_dim is None:
        max_dim = e
    if not 0 <= min_dim <= max_dim <= e:
        raise ValueError(f"need 0 <= min_dim <= max_dim <= e, got {min_dim}, {max_dim}, {e}")
    if e * math.log2(p) > budget_bits:
        count = sum(gaussian_binomial(e, k, p) for k in range(min_dim, max_dim + 1))
        raise EnumerationTooLarge(
            f"enumeration too large: |F_{p}^{e}| = {p**e} exceeds 2^{budget_bits} "
            f"({count} subgroups of dims {min_dim}..{max_dim})")
    return _enumerate(e, p, min_dim, max_dim)


def _enumerate(e, p, min_dim, max_dim):
    for k in range(min_dim, max_dim + 1):
        for batch in subgroup_basis_arrays(e, p, k):
            for rows in batch.tolist():
                yield SubgroupBasis(p, e, tuple(map(tuple, rows)))


def subgroup_basis_arrays(e: int, p: int, k: int) -> Iterator[np.ndarray]:
    """RREF bases of all k-dim subgroups of F_p^e, one (count, k, e) array per pivot set.

    Same order as :func:`enumerate_subgroups`; no budget check.
    """
    for pivots in itertools.combinations(range(e), k):
        pivset = set(pivots)
        template = np.zeros((k, e), dtype=np.int64)
        template[np.arange(k), pivots] = 1
        slots = [(i, j) for i, piv in enumerate(pivots) for j in range(piv + 1, e) if j not in pivset]
        values = np.array(list(itertools.product(range(p), repeat=len(slots))), dtype=np.int64)
        out = np.repeat(template[None], len(values), axis=0)
        if slots:
            ii, jj = zip(*slots)
            out[:, ii, jj] = values
        yield out


def is_closed_under_addition(vectors: Iterable[Sequence[int]], p: int = 2) -> bool:
    s = {tuple(int(x) % p for x in v) for v in vectors}
    if not s:
        raise ValueError("closure test needs a nonempty set")
    return all(tuple((a + b) % p for a, b in zip(x, y)) in s for x in s for y in s)


# --- the message space -----------------------------------------------------

@dataclass(frozen=True)
class Vector:
    entries: tuple[FieldElement, ...]


@dataclass(frozen=True, eq=False)
class VSpace:
    """V = F_q^d split into n bricks of F_q-dimension m."""

    field: FieldSpec
    m: int
    n: int

    def __post_init__(self):
        if self.m < 2 or self.n < 2:
            raise ValueError(f"bricks need m > 1 and n > 1, got m={self.m}, n={self.n}")

    def __eq__(self, other):
        return isinstance(other, VSpace) and (self.field, self.m, self.n) == (other.field, other.m, other.n)

    def __hash__(self):
        return hash((self.field, self.m, self.n))

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def d(self) -> int:
        return self.m * self.n

    @property
    def e(self) -> int:
        return self.d * self.field.f

    @property
    def m_p(self) -> int:
        return self.m * self.field.f

    @property
    def size(self) -> int:
        return self.p**self.e

    @property
    def brick_size(self) -> int:
        return self.p**self.m_p

    @cached_property
    def digits(self) -> np.ndarray:
        """(|V|, e) array of F_p coordinates of every point."""
        return digits_of(np.arange(self.size), self.p, self.e)

    def encode(self, v: Vector) -> int:
        if len(v.entries) != self.d:
            raise ValueError(f"vector has {len(v.entries)} entries, expected {self.d}")
        q = self.field.q
        return sum(self.field.index(x) * q**i for i, x in enumerate(v.entries))

    def decode(self, point: int) -> Vector:
        q = self.field.q
        out = []
        for _ in range(self.d):
            point, c = divmod(point, q)
            out.append(self.field.element(c))
        return Vector(tuple(out))

    def add(self, x, y):
        if self.p == 2:
            return np.bitwise_xor(x, y)
        return encode_digits((self.digits[x] + self.digits[y]) % self.p, self.p)

    def sub(self, x, y):
        if self.p == 2:
            return np.bitwise_xor(x, y)
        return encode_digits((self.digits[x] - self.digits[y]) % self.p, self.p)

    def brick_of(self, point, i: int):
        """Projection onto brick i (0-based) as a brick-local point index."""
        return (np.asarray(point) // self.brick_size**i) % self.brick_size

    def from_bricks(self, parts: Sequence) -> np.ndarray:
        return sum(np.asarray(b, dtype=np.int64) * self.brick_size**i for i, b in enumerate(parts))

    def basis_points(self) -> list[int]:
        return [self.p**j for j in range(self.e)]

    def brick_subgroup(self, bricks: Iterable[int]) -> SubgroupBasis:
        """The subgroup sum of V_i over the given 0-based brick indices."""
        rows = []
        for i in sorted(bricks):
            for j in range(i * self.m_p, (i + 1) * self.m_p):
                rows.append(tuple(int(k == j) for k in range(self.e)))
        return SubgroupBasis(self.p, self.e, tuple(rows))

    def fp_matrix(self, matrix: Sequence[Sequence[FieldElement]]) -> np.ndarray:
        """Expand a d x d matrix over F_q (row-vector action) to e x e over F_p."""
        fs = self.field
        if len(matrix) != self.d or any(len(row) != self.d for row in matrix):
            raise ValueError(f"layer must be {self.d} x {self.d}")
        out = np.zeros((self.e, self.e), dtype=np.int64)
        for i, row in enumerate(matrix):
            for k in range(fs.f):
                xk = fs.element(fs.p**k)  # the monomial x^k
                for j, a in enumerate(row):
                    c = ff_mul(xk, a, fs)
                    out[i * fs.f + k, j * fs.f:(j + 1) * fs.f] = c.coeffs
        return out

    def apply_fp_matrix(self, points, mat: np.ndarray) -> np.ndarray:
        return encode_digits(self.digits[points] @ mat % self.p, self.p)
