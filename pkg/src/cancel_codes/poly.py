"""Polynomials over GF(q), elementary symmetric functions and block-matrix independence.

A list of root sets ``X_1, ..., X_l`` with ``0 < |X_j| < k`` and
``sum(k - |X_j|) == k`` defines k polynomials ``x^i * p_{X_j}(x)``
(``0 <= i < k - |X_j|``) in the k-dimensional space of polynomials of degree
below k. The root polynomials are (k - |X_1|, ..., k - |X_l|)-independent
exactly when the k x k coefficient matrix of those polynomials is nonsingular.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Iterator, Sequence

from .errors import SearchExhausted, ShapeError, UniverseTooSmall
from .finite_field import Field, FieldElement

EXHAUSTIVE_LIMIT = 10**6


@dataclass(frozen=True)
class Poly:
    """Dense polynomial, constant term first, trailing zeros trimmed."""

    field: Field
    coeffs: tuple[FieldElement, ...] = ()

    def __post_init__(self):
        c = list(self.coeffs)
        while c and not c[-1]:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def from_ints(cls, field: Field, values: Sequence[int]) -> Poly:
        return cls(field, tuple(field(v) for v in values))

    @property
    def degree(self) -> float:
        return len(self.coeffs) - 1 if self.coeffs else float("-inf")

    def __call__(self, x: FieldElement) -> FieldElement:
        return poly_eval(self, x)

    def __add__(self, other: Poly) -> Poly:
        f = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [f.zero] * (n - len(self.coeffs))
        b = list(other.coeffs) + [f.zero] * (n - len(other.coeffs))
        return Poly(f, tuple(x + y for x, y in zip(a, b)))

    def __mul__(self, other: Poly) -> Poly:
        f = self.field
        if not self.coeffs or not other.coeffs:
            return Poly(f)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            for j, y in enumerate(other.coeffs):
                out[i + j] = f.add(out[i + j], f.mul(x.value, y.value))
        return Poly.from_ints(f, out)

    def shift(self, i: int) -> Poly:
        """Multiply by x**i."""
        if not self.coeffs:
            return self
        return Poly(self.field, (self.field.zero,) * i + self.coeffs)

    def coefficient_vector(self, k: int) -> list[FieldElement]:
        """Coordinates in the basis 1, x, ..., x^(k-1)."""
        if len(self.coeffs) > k:
            raise ShapeError(f"degree {self.degree} does not fit below {k}")
        return list(self.coeffs) + [self.field.zero] * (k - len(self.coeffs))

    def __str__(self) -> str:
        terms = [f"{c}*x^{i}" for i, c in enumerate(self.coeffs) if c]
        return " + ".join(reversed(terms)) or "0"


def _field_of(elems: Sequence[FieldElement], field: Field | None) -> Field:
    if field is not None:
        return field
    if not elems:
        raise ValueError("field must be given for an empty variable set")
    return elems[0].field


def elementary_symmetric(X: Sequence[FieldElement], i: int, field: Field | None = None) -> FieldElement:
    """sigma_i of the multiset X; sigma_0 = 1 and sigma_i = 0 outside 0..|X|."""
    f = _field_of(X, field)
    if i < 0 or i > len(X):
        return f.zero
    # e[j] holds sigma_j of the prefix processed so far
    e = [1] + [0] * i
    for x in X:
        for j in range(i, 0, -1):
            e[j] = f.add(e[j], f.mul(e[j - 1], x.value))
    return f(e[i])


def root_polynomial(Z: Sequence[FieldElement], field: Field | None = None) -> Poly:
    """The monic polynomial prod (x - z) over the multiset Z."""
    f = _field_of(Z, field)
    out = [1]
    for z in Z:
        nz = f.neg(z.value)
        nxt = [0] * (len(out) + 1)
        for j, c in enumerate(out):
            nxt[j] = f.add(nxt[j], f.mul(c, nz))
            nxt[j + 1] = f.add(nxt[j + 1], c)
        out = nxt
    return Poly.from_ints(f, out)


def poly_eval(p: Poly, x: FieldElement) -> FieldElement:
    f = p.field
    acc = 0
    for c in reversed(p.coeffs):
        acc = f.add(f.mul(acc, x.value), c.value)
    return f(acc)


@dataclass(frozen=True)
class SquareMatrix:
    field: Field
    entries: tuple[tuple[FieldElement, ...], ...]

    def __post_init__(self):
        k = len(self.entries)
        if any(len(row) != k for row in self.entries):
            raise ShapeError("matrix is not square")

    @property
    def k(self) -> int:
        return len(self.entries)

    def as_ints(self) -> list[list[int]]:
        return [[e.value for e in row] for row in self.entries]


def _check_shape(sets: Sequence[Sequence[FieldElement]], k: int) -> None:
    if not sets:
        raise ShapeError("at least one variable set is required")
    for X in sets:
        if not 0 < len(X) < k:
            raise ShapeError(f"set size {len(X)} outside 0 < t < {k}")
    if sum(k - len(X) for X in sets) != k:
        raise ShapeError(f"sum of (k - t_j) is {sum(k - len(X) for X in sets)}, expected {k}")


def build_block_matrix(sets: Sequence[Sequence[FieldElement]], k: int) -> SquareMatrix:
    """Coefficient rows of ``x^i * p_X(x)`` in basis 1..x^(k-1); blocks in input order, shift increasing."""
    _check_shape(sets, k)
    f = sets[0][0].field
    rows = []
    for X in sets:
        p = root_polynomial(X, f)
        for i in range(k - len(X)):
            rows.append(tuple(p.shift(i).coefficient_vector(k)))
    return SquareMatrix(f, tuple(rows))


def sigma_block_matrix(sets: Sequence[Sequence[FieldElement]], k: int) -> SquareMatrix:
    """The block matrix written with elementary symmetric values.

    Block j has ``k - t_j`` rows; row i of the block carries
    ``sigma_0(X_j), ..., sigma_t(X_j)`` starting at column i.
    """
    _check_shape(sets, k)
    f = sets[0][0].field
    rows = []
    for X in sets:
        t = len(X)
        sig = [elementary_symmetric(X, m) for m in range(t + 1)]
        for i in range(k - t):
            row = [f.zero] * k
            row[i : i + t + 1] = sig
            rows.append(tuple(row))
    return SquareMatrix(f, tuple(rows))


def determinant(M: SquareMatrix) -> FieldElement:
    """Determinant by Gaussian elimination with row pivoting."""
    f = M.field
    a = M.as_ints()
    k = len(a)
    det = 1
    for col in range(k):
        pivot = next((r for r in range(col, k) if a[r][col]), None)
        if pivot is None:
            return f.zero
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = f.neg(det)
        pv = a[col][col]
        det = f.mul(det, pv)
        inv = f.inv(pv)
        for r in range(col + 1, k):
            if a[r][col]:
                factor = f.mul(a[r][col], inv)
                a[r] = [f.sub(x, f.mul(factor, y)) for x, y in zip(a[r], a[col])]
    return f(det)


def is_independent(sets: Sequence[Sequence[FieldElement]], k: int) -> bool:
    """Whether the root polynomials of ``sets`` are (k - |X_1|, ..., k - |X_l|)-independent."""
    return bool(determinant(build_block_matrix(sets, k)))


def triangular_substitution(sizes: Sequence[int], k: int) -> list[list[int]]:
    """0/1 values for the variables of each block making the sigma matrix unit lower triangular.

    Block j gets as many 1's as there are rows above it; all other variables are 0.
    """
    if any(not 0 < t < k for t in sizes) or sum(k - t for t in sizes) != k:
        raise ShapeError(f"inadmissible block sizes {tuple(sizes)} for k={k}")
    out, offset = [], 0
    for t in sizes:
        out.append([1] * offset + [0] * (t - offset))
        offset += k - t
    return out


def three_partitions(elems: Sequence, k: int) -> Iterator[tuple[tuple, tuple, tuple]]:
    """Unordered partitions of ``elems`` into three blocks, each of size in [1, k)."""
    n = len(elems)
    labels = [0] * n

    def rec(i: int, used: int):
        if i == n:
            if used == 3:
                blocks = tuple(tuple(e for e, lab in zip(elems, labels) if lab == b) for b in range(3))
                if all(1 <= len(b) < k for b in blocks):
                    yield blocks
            return
        for lab in range(min(used + 1, 3)):
            labels[i] = lab
            yield from rec(i + 1, max(used, lab + 1))

    yield from rec(0, 0)


def failing_partition(S: Sequence[FieldElement], k: int):
    """First admissible 3-partition of S whose root polynomials are dependent, or None."""
    for part in three_partitions(S, k):
        if not is_independent(part, k):
            return part
    return None


@dataclass(frozen=True)
class GoodSet:
    elements: tuple[FieldElement, ...]
    tried: int
    exhaustive: bool = False

    def __str__(self) -> str:
        return ";".join(str(e) for e in self.elements)


def find_good_set(f: Field, k: int, rng_seed: int = 0, max_tries: int = 1000) -> GoodSet:
    """A 2k-subset S of the field whose every admissible 3-partition gives independent root polynomials.

    Candidates are sampled uniformly and without repetition from a seeded
    generator; once ``max_tries`` samples fail and the number of 2k-subsets is
    at most ``EXHAUSTIVE_LIMIT``, the remaining subsets are scanned in
    lexicographic order.
    """
    if k < 2:
        raise ShapeError("k must be at least 2")
    size = 2 * k
    if f.q < size:
        raise UniverseTooSmall(f"q={f.q} < 2k={size}")
    elems = sorted(f.elements(), key=lambda e: e.coeffs)
    total = comb(f.q, size)
    rng = random.Random(rng_seed)
    seen: set[tuple[int, ...]] = set()
    last_failure = None
    tried = 0

    def accept(idx: tuple[int, ...]):
        nonlocal last_failure, tried
        tried += 1
        S = tuple(elems[i] for i in idx)
        bad = failing_partition(S, k)
        if bad is None:
            return S
        last_failure = bad
        return None

    while tried < max_tries and len(seen) < total:
        idx = tuple(sorted(rng.sample(range(f.q), size)))
        if idx in seen:
            continue
        seen.add(idx)
        S = accept(idx)
        if S is not None:
            return GoodSet(S, tried)
    if total <= EXHAUSTIVE_LIMIT:
        for idx in combinations(range(f.q), size):
            if idx in seen:
                continue
            S = accept(idx)
            if S is not None:
                return GoodSet(S, tried, exhaustive=True)
    raise SearchExhausted(
        f"no good {size}-set found in GF({f.q}) after {tried} candidates",
        partition=last_failure,
    )
