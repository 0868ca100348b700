"""Explicit families: polynomial graphs over GF(q), random-matrix cosets, partite and packing designs."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations, product
from math import comb
from typing import Iterator

from .errors import BadShape, OutOfRegime, UniverseTooSmall
from .family import SetFamily, mask_of
from .finite_field import FieldElement, field_new
from .poly import Poly, find_good_set
from .predicates import is_linear, is_t_cancellative


class ConstructionFailed(AssertionError):
    """Raised when a construction's output fails its own re-verification."""


# -- polynomial graphs ----------------------------------------------------------

@dataclass(frozen=True)
class AlgebraicCode:
    q: int
    k: int
    S: tuple[FieldElement, ...]
    family: SetFamily
    verified: bool | None = None

    def vertex(self, s_index: int, y: FieldElement) -> int:
        return s_index * self.q + _element_index(y)

    def partite_classes(self) -> list[int]:
        return [((1 << self.q) - 1) << (i * self.q) for i in range(2 * self.k)]


def _element_index(y: FieldElement) -> int:
    order = sorted(y.field.elements(), key=lambda e: e.coeffs)
    return order.index(y)


def construct_algebraic(
    q: int,
    k: int,
    S=None,
    rng_seed: int = 0,
    max_tries: int = 1000,
    verify: bool = True,
) -> AlgebraicCode:
    """The 2k-uniform family of graphs {(s, p(s)) : s in S} of all polynomials p of degree < k.

    Vertex (s, y) is numbered ``index_in_S(s) * q + index(y)`` where ``index``
    is the canonical element order, so the family lives on 2kq vertices.
    """
    if k < 2:
        raise BadShape("k must be at least 2")
    if q < 2 * k:
        raise UniverseTooSmall(f"q={q} < 2k={2 * k}")
    f = field_new(q)
    if S is None:
        S = find_good_set(f, k, rng_seed, max_tries).elements
    S = tuple(S)
    if len(S) != 2 * k or len(set(S)) != 2 * k:
        raise BadShape(f"S must consist of {2 * k} distinct field elements")
    order = sorted(f.elements(), key=lambda e: e.coeffs)
    pos = {e.value: i for i, e in enumerate(order)}
    svals = [s.value for s in S]
    members = []
    for coeffs in product([e.value for e in order], repeat=k):
        m = 0
        for i, s in enumerate(svals):
            acc = 0
            for c in reversed(coeffs):
                acc = f.add(f.mul(acc, s), c)
            m |= 1 << (i * q + pos[acc])
        members.append(m)
    fam = SetFamily(2 * k * q, tuple(members), 2 * k)
    verified = None
    if verify:
        verified = bool(is_t_cancellative(fam, 2))
        if not verified:
            raise ConstructionFailed(f"algebraic family for q={q}, k={k} is not 2-cancellative")
    return AlgebraicCode(q, k, S, fam, verified)


def polynomial_of(code: AlgebraicCode, index: int) -> Poly:
    """The polynomial whose graph is member ``index`` (members follow coefficient-tuple order)."""
    f = field_new(code.q)
    order = sorted(f.elements(), key=lambda e: e.coeffs)
    digits = []
    for _ in range(code.k):
        index, r = divmod(index, code.q)
        digits.append(r)
    # product() varies the last coefficient fastest
    return Poly(f, tuple(order[d] for d in reversed(digits)))


# -- cosets of a random binary matrix --------------------------------------------

def gf2_rank(rows: list[int]) -> int:
    rank = 0
    rows = list(rows)
    while rows:
        pivot = rows.pop()
        if pivot:
            rank += 1
            low = pivot & -pivot
            rows = [r ^ pivot if r & low else r for r in rows]
    return rank


def gf2_rref(rows: list[int]) -> list[tuple[int, int]]:
    """Reduced row echelon basis as (pivot column, row) pairs; pivot = lowest set bit."""
    basis: list[tuple[int, int]] = []
    for r in rows:
        for p, b in basis:
            if r >> p & 1:
                r ^= b
        if r:
            p = (r & -r).bit_length() - 1
            basis = [(q, b ^ r if b >> p & 1 else b) for q, b in basis]
            basis.append((p, r))
    return sorted(basis)


def _columns(rows: list[int], cols: list[int]) -> list[int]:
    out = []
    for r in rows:
        v = 0
        for i, c in enumerate(cols):
            if r >> c & 1:
                v |= 1 << i
        out.append(v)
    return out


@dataclass(frozen=True)
class TolhuizenCode:
    n: int
    r: int
    matrix: tuple[int, ...]  # n - r rows, bit j = column j
    family: SetFamily
    cosets: dict[int, SetFamily]
    best_label: int
    best: SetFamily
    target: int = 0
    meets_target: bool = True
    attempt_sizes: tuple[int, ...] = field(default=())


def coset_label(x: int, rref: list[tuple[int, int]]) -> int:
    """Representative of x + rowspace supported on the non-pivot columns."""
    for p, b in rref:
        if x >> p & 1:
            x ^= b
    return x


def tolhuizen_from_matrix(n: int, r: int, matrix) -> TolhuizenCode:
    """All r-sets whose complementary columns are nonsingular, split by coset of the row space."""
    rows = list(matrix)
    members = []
    for F in combinations(range(n), r):
        rest = [c for c in range(n) if c not in F]
        if gf2_rank(_columns(rows, rest)) == n - r:
            members.append(mask_of(F))
    fam = SetFamily(n, tuple(members), r)
    rref = gf2_rref(rows)
    groups: dict[int, list[int]] = {}
    for m in members:
        groups.setdefault(coset_label(m, rref), []).append(m)
    cosets = {lab: SetFamily(n, tuple(ms), r) for lab, ms in sorted(groups.items())}
    if cosets:
        best_label = max(cosets, key=lambda lab: (len(cosets[lab]), -lab))
        best = cosets[best_label]
    else:
        best_label, best = 0, SetFamily(n, (), r)
    return TolhuizenCode(n, r, tuple(rows), fam, cosets, best_label, best)


def tolhuizen_trials(n: int, r: int, rng_seed: int, retries: int) -> Iterator[TolhuizenCode]:
    """The sequence of codes built from the seeded random (n-r) x n matrices."""
    if n < 2 * r:
        raise OutOfRegime(f"n={n} < 2r={2 * r}; there c_r(n) = 2^(n-r) exactly")
    rng = random.Random(rng_seed)
    for _ in range(retries):
        rows = [rng.getrandbits(n) for _ in range(n - r)]
        yield tolhuizen_from_matrix(n, r, rows)


def construct_tolhuizen(n: int, r: int, rng_seed: int, retries: int = 20) -> TolhuizenCode:
    """Best code over at most ``retries`` matrices; stops at the first beating c0 * C(n, r).

    When no matrix reaches the target the largest one found is returned with
    ``meets_target=False``.
    """
    from .bounds import tolhuizen_c0

    c0 = tolhuizen_c0(1e-15).value
    threshold = c0 * comb(n, r)
    target = int(threshold) + 1
    best = None
    sizes = []
    for code in tolhuizen_trials(n, r, rng_seed, retries):
        sizes.append(len(code.family))
        if best is None or len(code.family) > len(best.family):
            best = code
        if len(code.family) > threshold:
            break
    assert best is not None
    return TolhuizenCode(
        best.n, best.r, best.matrix, best.family, best.cosets, best.best_label, best.best,
        target=target, meets_target=len(best.family) > threshold, attempt_sizes=tuple(sizes),
    )


# -- complete r-partite ----------------------------------------------------------

def partite_classes(n: int, r: int) -> list[list[int]]:
    """Consecutive classes of sizes floor((n + i) / r), i = 0..r-1."""
    classes, start = [], 0
    for i in range(r):
        size = (n + i) // r
        classes.append(list(range(start, start + size)))
        start += size
    return classes


def construct_complete_r_partite(n: int, r: int) -> SetFamily:
    if not n >= r >= 2:
        raise BadShape(f"need n >= r >= 2, got n={n}, r={r}")
    classes = partite_classes(n, r)
    return SetFamily.from_sets(n, product(*classes), r)


# -- linear 4-uniform packings -----------------------------------------------------

def construct_linear_4uniform(n: int, rng_seed: int = 0) -> SetFamily:
    """Greedy maximal (n, 4, 2)-packing over a seeded shuffle of all 4-sets."""
    if n < 4:
        raise BadShape("need n >= 4")
    quads = list(combinations(range(n), 4))
    random.Random(rng_seed).shuffle(quads)
    used_pairs: set[tuple[int, int]] = set()
    chosen = []
    for Q in quads:
        pairs = list(combinations(Q, 2))
        if any(p in used_pairs for p in pairs):
            continue
        used_pairs.update(pairs)
        chosen.append(Q)
    fam = SetFamily.from_sets(n, chosen, 4)
    assert is_linear(fam)
    return fam


# -- special K4's of packed H_k copies ----------------------------------------------

@dataclass(frozen=True)
class HkGraph:
    """K_k on vertices 0..k-1 plus one degree-3 vertex per triple of the clique."""

    k: int

    @property
    def triples(self) -> list[tuple[int, int, int]]:
        return list(combinations(range(self.k), 3))

    @property
    def vertex_count(self) -> int:
        return self.k + comb(self.k, 3)

    @property
    def edges(self) -> list[tuple[int, int]]:
        out = list(combinations(range(self.k), 2))
        for i, T in enumerate(self.triples):
            out.extend((x, self.k + i) for x in T)
        return out

    @property
    def special_k4s(self) -> list[tuple[int, ...]]:
        return [T + (self.k + i,) for i, T in enumerate(self.triples)]


def _compatible(new_vs: list[int], new_edges: set, old_vs: set, old_edges: set) -> bool:
    common = old_vs.intersection(new_vs)
    if len(common) > 2:
        return False
    if len(common) == 2:
        pair = tuple(sorted(common))
        if pair in new_edges or pair in old_edges:
            return False
    return True


def construct_hk_packing(n: int, k: int, mode: str = "disjoint", rng_seed: int = 0, tries: int = 2000) -> SetFamily:
    """4-uniform family of special K4 vertex sets over a packing of H_k copies.

    ``disjoint`` places floor(n / |V(H_k)|) vertex-disjoint copies. ``greedy``
    then tries ``tries`` random placements, keeping a copy when it meets every
    earlier copy in at most two vertices and any two shared vertices are a
    non-edge of both copies (so the packing stays almost disjoint and induced).
    """
    if k < 3:
        raise BadShape("k must be at least 3")
    if mode not in ("disjoint", "greedy"):
        raise ValueError(f"unknown mode {mode!r}")
    H = HkGraph(k)
    nv = H.vertex_count
    if n < nv:
        raise UniverseTooSmall(f"n={n} < {nv} vertices of H_{k}")
    copies: list[tuple[list[int], set]] = []

    def place(vs: list[int]) -> tuple[list[int], set]:
        return vs, {tuple(sorted((vs[a], vs[b]))) for a, b in H.edges}

    for c in range(n // nv):
        copies.append(place(list(range(c * nv, (c + 1) * nv))))
    if mode == "greedy":
        rng = random.Random(rng_seed)
        for _ in range(tries):
            vs, edges = place(rng.sample(range(n), nv))
            if all(_compatible(vs, edges, set(ovs), oedges) for ovs, oedges in copies):
                copies.append((vs, edges))
    members = [[vs[x] for x in K] for vs, _ in copies for K in H.special_k4s]
    return SetFamily.from_sets(n, members, 4)
