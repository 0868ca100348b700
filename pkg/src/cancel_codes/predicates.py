"""Decidable properties of set families; every failed check carries a replayable witness."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from itertools import combinations, permutations

import numpy as np

from .errors import DuplicateMembers, NotThreeUniform, NotUniform
from .family import SetFamily, Verdict, VertexPartition, Witness, mask_of, vertices_of

_HASH_MULT = np.uint64(0x9E3779B97F4A7C15)
# below this many members the pure-Python residual scan beats numpy
_NUMPY_MIN_MEMBERS = 96


def _require_distinct(F: SetFamily) -> None:
    if F.has_duplicates():
        raise DuplicateMembers("predicate requires pairwise distinct members")


def _union(F: SetFamily, idx) -> int:
    u = 0
    for i in idx:
        u |= F.members[i]
    return u


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get("CANCEL_CODES_THREADS", "1")))
    except ValueError:
        return 1


# -- t-cancellative --------------------------------------------------------------

def _canc_witness(F: SetFamily, T, b: int, c: int, kind: str = "t-cancellative") -> Witness:
    u = _union(F, T)
    return Witness(
        kind,
        tuple(T) + (b, c),
        {"union_with_B": vertices_of(u | F.members[b]), "union_with_C": vertices_of(u | F.members[c])},
    )


def _naive_cancellative(F: SetFamily, t: int) -> Witness | None:
    mem = F.members
    for tup in combinations(range(len(mem)), t + 2):
        for b, c in combinations(tup, 2):
            T = [i for i in tup if i != b and i != c]
            u = _union(F, T)
            if u | mem[b] == u | mem[c]:
                return _canc_witness(F, T, b, c)
    return None


def _residual_scan_python(F: SetFamily, T: tuple[int, ...]) -> Witness | None:
    u = _union(F, T)
    notu = ~u
    seen: dict[int, int] = {}
    excluded = set(T)
    for j, m in enumerate(F.members):
        if j in excluded:
            continue
        r = m & notu
        if r in seen:
            return _canc_witness(F, T, seen[r], j)
        seen[r] = j
    return None


def _words(members, n: int) -> np.ndarray:
    w = max(1, (n + 63) // 64)
    out = np.zeros((len(members), w), dtype=np.uint64)
    mask = (1 << 64) - 1
    for i, m in enumerate(members):
        for k in range(w):
            out[i, k] = (m >> (64 * k)) & mask
    return out


def _hash_rows(r: np.ndarray) -> np.ndarray:
    h = r[..., 0].copy()
    for k in range(1, r.shape[-1]):
        h = h * _HASH_MULT + r[..., k]
    return h


def _residual_chunk(args) -> tuple[int, Witness | None]:
    """Scan every t-subset whose first t-1 indices are ``prefix`` (vectorised over the last index)."""
    F, t, prefixes = args
    mem = F.members
    N = len(mem)
    W = _words(mem, F.n)
    for order, prefix in prefixes:
        start = prefix[-1] + 1 if prefix else 0
        lasts = np.arange(start, N)
        if lasts.size == 0:
            continue
        base = np.zeros(W.shape[1], dtype=np.uint64)
        for i in prefix:
            base |= W[i]
        U = W[lasts] | base  # (L, w)
        R = W[None, :, :] & ~U[:, None, :]  # (L, N, w)
        H = _hash_rows(R)
        # excluded members get distinct sentinels; any remaining tie is checked exactly
        sentinel = np.uint64(0xFFFFFFFFFFFFFFFF)
        for i in prefix:
            H[:, i] = sentinel - np.uint64(i)
        H[np.arange(lasts.size), lasts] = sentinel - np.uint64(N) - np.uint64(1)
        S = np.sort(H, axis=1)
        dup_rows = np.nonzero((S[:, 1:] == S[:, :-1]).any(axis=1))[0]
        for row in dup_rows:
            w = _residual_scan_python(F, tuple(prefix) + (int(lasts[row]),))
            if w is not None:
                return order, w
    return -1, None


def _residual_cancellative(F: SetFamily, t: int, threads: int = 1) -> Witness | None:
    N = len(F)
    if N < _NUMPY_MIN_MEMBERS:
        for T in combinations(range(N), t):
            w = _residual_scan_python(F, T)
            if w is not None:
                return w
        return None
    prefixes = list(enumerate(combinations(range(N), t - 1)))
    if threads <= 1:
        return _residual_chunk((F, t, prefixes))[1]
    chunks = [prefixes[i::threads] for i in range(threads)]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        results = list(pool.map(_residual_chunk, [(F, t, c) for c in chunks]))
    found = [(o, w) for o, w in results if w is not None]
    # earliest prefix wins so the witness does not depend on scheduling
    return min(found, key=lambda ow: ow[0])[1] if found else None


def is_t_cancellative(F: SetFamily, t: int, engine: str = "residual", threads: int | None = None) -> Verdict:
    """No t distinct members A_1..A_t and distinct B, C outside them give equal unions.

    ``engine="naive"`` enumerates all (t+2)-subsets and role assignments;
    ``engine="residual"`` checks, for each t-subset with union U, that
    ``M -> M minus U`` is injective on the remaining members.
    """
    if t < 1:
        raise ValueError("t must be at least 1")
    _require_distinct(F)
    if len(F) <= t + 1:
        return Verdict(True)
    if engine == "naive":
        w = _naive_cancellative(F, t)
    elif engine == "residual":
        w = _residual_cancellative(F, t, threads or default_threads())
    else:
        raise ValueError(f"unknown engine {engine!r}")
    return Verdict(w is None, w)


def is_cancellative(F: SetFamily) -> Verdict:
    """Pairwise form: for A != B and A != C, A u B = A u C forces B = C."""
    _require_distinct(F)
    mem = F.members
    for a, A in enumerate(mem):
        for b, c in combinations(range(len(mem)), 2):
            if a in (b, c):
                continue
            if A | mem[b] == A | mem[c]:
                return Verdict(False, _canc_witness(F, (a,), b, c))
    return Verdict(True)


is_union_free = is_cancellative


# -- t*-cancellative ---------------------------------------------------------------

def is_t_star_cancellative(F: SetFamily, t: int) -> Verdict:
    """Sequence version: A_1..A_t may repeat; equal unions force B = C or {B, C} inside the A's.

    For a set T of 1..t distinct members with union U this is the same as:
    ``M -> M minus U`` is injective on members outside T and never empty there.
    """
    if t < 1:
        raise ValueError("t must be at least 1")
    _require_distinct(F)
    mem = F.members
    N = len(mem)
    for size in range(1, min(t, N) + 1):
        for T in combinations(range(N), size):
            u = _union(F, T)
            seen: dict[int, int] = {}
            excluded = set(T)
            for j, m in enumerate(mem):
                if j in excluded:
                    continue
                r = m & ~u
                if r == 0:
                    # B is a member of T, C = member j
                    return Verdict(False, _tstar_witness(F, t, T, T[0], j))
                if r in seen:
                    return Verdict(False, _tstar_witness(F, t, T, seen[r], j))
                seen[r] = j
    return Verdict(True)


def _tstar_witness(F: SetFamily, t: int, T, b: int, c: int) -> Witness:
    seq = tuple(T) + (T[0],) * (t - len(T))
    u = _union(F, T)
    return Witness(
        "t*-cancellative",
        seq + (b, c),
        {"union_with_B": vertices_of(u | F.members[b]), "union_with_C": vertices_of(u | F.members[c])},
    )


# -- cover-free, locally thin, linear, sparse --------------------------------------

def is_cover_free(F: SetFamily, g: int) -> Verdict:
    """No member lies inside the union of at most g other members.

    With more than g members this is the usual "union of g others" condition;
    the "at most" reading keeps tiny families from passing vacuously. g = 0
    just forbids the empty set.
    """
    if g < 0:
        raise ValueError("g must be non-negative")
    _require_distinct(F)
    mem = F.members
    N = len(mem)
    for a0, A0 in enumerate(mem):
        others = [i for i in range(N) if i != a0]
        # unions only grow, so the largest admissible cover size suffices
        for T in combinations(others, min(g, N - 1)):
            u = _union(F, T)
            if A0 & ~u == 0:
                return Verdict(False, Witness("cover-free", (a0,) + T, {"covered": vertices_of(A0), "cover": vertices_of(u)}))
    return Verdict(True)


def _degree_one_vertices(members) -> int:
    seen1 = seen2 = 0
    for m in members:
        seen2 |= seen1 & m
        seen1 |= m
    return seen1 & ~seen2


def is_locally_thin(F: SetFamily, a: int, b: int) -> Verdict:
    """Every a distinct members have at least b vertices of degree exactly one among them."""
    if not 1 <= b <= a:
        raise ValueError("need 1 <= b <= a")
    _require_distinct(F)
    mem = F.members
    for T in combinations(range(len(mem)), a):
        ones = _degree_one_vertices(mem[i] for i in T)
        if ones.bit_count() < b:
            return Verdict(False, Witness("locally-thin", T, {"degree_one": vertices_of(ones), "required": (b,)}))
    return Verdict(True)


def is_linear(F: SetFamily) -> Verdict:
    mem = F.members
    for i, j in combinations(range(len(mem)), 2):
        if (mem[i] & mem[j]).bit_count() > 1:
            return Verdict(False, Witness("linear", (i, j), {"intersection": vertices_of(mem[i] & mem[j])}))
    return Verdict(True)


def _small_union_subsets(mem, e: int, v: int):
    """Yield index tuples of e members whose union has at most v vertices (DFS, union-size pruning)."""
    N = len(mem)

    def rec(start, chosen, u):
        if len(chosen) == e:
            yield tuple(chosen)
            return
        for j in range(start, N - (e - len(chosen)) + 1):
            nu = u | mem[j]
            if nu.bit_count() <= v:
                chosen.append(j)
                yield from rec(j + 1, chosen, nu)
                chosen.pop()

    yield from rec(0, [], 0)


def is_sparse(F: SetFamily, v: int, e: int) -> Verdict:
    """No e distinct members are spanned by v or fewer vertices."""
    mem = F.members
    if e > len(mem):
        return Verdict(True)
    for T in _small_union_subsets(mem, e, v):
        return Verdict(False, Witness("sparse", T, {"span": vertices_of(_union(F, T)), "max_span": (v,)}))
    return Verdict(True)


# -- the two forbidden 4-edge configurations --------------------------------------

def _shape(edges) -> tuple:
    """Isomorphism invariant of a small hypergraph: vertex incidence patterns minimised over edge orders."""
    verts = 0
    for e in edges:
        verts |= e
    best = None
    for perm in permutations(edges):
        sig = tuple(sorted(sum(1 << k for k, e in enumerate(perm) if e >> v & 1) for v in vertices_of(verts)))
        if best is None or sig < best:
            best = sig
    return best


G6_EDGES = ((1, 2, 3), (1, 5, 6), (4, 2, 6), (4, 5, 3))
G7_EDGES = ((1, 2, 3), (4, 5, 6), (7, 2, 6), (7, 5, 3))
G6 = SetFamily.from_sets(7, [[x - 1 for x in e] for e in G6_EDGES], 3)
G7 = SetFamily.from_sets(7, [[x - 1 for x in e] for e in G7_EDGES], 3)
_FORBIDDEN = {"G6": _shape(G6.members), "G7": _shape(G7.members)}


def contains_G6_or_G7(F: SetFamily) -> Verdict:
    """Whether some four members form a copy of G6 or G7 (not necessarily induced).

    The returned Verdict *holds* when a copy is found; its witness names the copy.
    """
    if any(m.bit_count() != 3 for m in F.members):
        raise NotThreeUniform("G6/G7 containment is defined for 3-uniform families")
    for T in _small_union_subsets(F.members, 4, 7):
        u = _union(F, T).bit_count()
        if u < 6:
            continue
        sh = _shape([F.members[i] for i in T])
        for name, target in _FORBIDDEN.items():
            if sh == target:
                return Verdict(True, Witness(f"contains-{name}", T, {"span": vertices_of(_union(F, T))}))
    return Verdict(False)


# -- r-partiteness ---------------------------------------------------------------

def _require_uniform(F: SetFamily, r: int | None = None) -> int:
    u = F.uniformity()
    if F.members and (u is None or (r is not None and u != r)):
        raise NotUniform(f"family is not {r or ''}-uniform".replace("  ", " "))
    return u if u is not None else (r or 0)


def is_r_partite(F: SetFamily, P: VertexPartition) -> Verdict:
    """Every member meets every class of P in exactly one vertex."""
    r = _require_uniform(F, len(P.classes))
    if not P.is_partition_of(F.n):
        raise ValueError("classes do not partition the vertex set")
    for i, m in enumerate(F.members):
        for c in P.classes:
            if (m & c).bit_count() != 1:
                return Verdict(False, Witness("r-partite", (i,), {"member": vertices_of(m), "class": vertices_of(c)}))
    return Verdict(True)


def find_r_partition(F: SetFamily, r: int, seed: int = 0, restarts: int = 200) -> VertexPartition | None:
    """An r-partition making F r-partite, or None.

    This is an r-colouring of the 2-shadow. Up to 15 vertices the backtracking
    search is exhaustive and a None answer is authoritative; beyond that,
    randomised restarts with a bounded backtrack are used and None only means
    no partition was found.
    """
    _require_uniform(F, r)
    n = F.n
    nbrs = [0] * n
    for m in F.members:
        for v in vertices_of(m):
            nbrs[v] |= m & ~(1 << v)
    active = [v for v in range(n) if nbrs[v]]
    import random

    rng = random.Random(seed)
    budget = None if n <= 15 else 20000

    def attempt(order):
        color = {}
        nodes = 0

        def rec(i):
            nonlocal nodes
            if i == len(order):
                return True
            nodes += 1
            if budget is not None and nodes > budget:
                return False
            v = order[i]
            used = {color[u] for u in vertices_of(nbrs[v]) if u in color}
            # symmetry: the first vertex may take only colour 0
            top = 1 if i == 0 else r
            for c in range(top):
                if c not in used:
                    color[v] = c
                    if rec(i + 1):
                        return True
                    del color[v]
            return False

        return color if rec(0) else None

    order = sorted(active, key=lambda v: -bin(nbrs[v]).count("1"))
    tries = [order] if budget is None else [order] + [rng.sample(active, len(active)) for _ in range(restarts)]
    for o in tries:
        color = attempt(o)
        if color is not None:
            classes = [0] * r
            for v in range(n):
                classes[color.get(v, 0)] |= 1 << v
            return VertexPartition(tuple(classes))
    return None


# -- witness replay -------------------------------------------------------------

def replay(F: SetFamily, w: Witness) -> bool:
    """Re-evaluate the defining condition on the witness members; True iff the violation is real."""
    mem = F.members
    idx = w.indices
    if w.kind in ("t-cancellative", "t*-cancellative"):
        *A, b, c = idx
        u = _union(F, A)
        if w.kind == "t-cancellative" and len(set(idx)) != len(idx):
            return False
        if b == c or mem[b] == mem[c] or {b, c} <= set(A):
            return False
        return u | mem[b] == u | mem[c]
    if w.kind == "cover-free":
        a0, *T = idx
        return len(set(idx)) == len(idx) and mem[a0] & ~_union(F, T) == 0
    if w.kind == "locally-thin":
        return len(set(idx)) == len(idx) and _degree_one_vertices(mem[i] for i in idx).bit_count() < w.detail["required"][0]
    if w.kind == "linear":
        i, j = idx
        return i != j and (mem[i] & mem[j]).bit_count() > 1
    if w.kind == "sparse":
        return len(set(idx)) == len(idx) and _union(F, idx).bit_count() <= w.detail["max_span"][0]
    if w.kind.startswith("contains-"):
        name = w.kind.split("-", 1)[1]
        return _shape([mem[i] for i in idx]) == _FORBIDDEN[name]
    if w.kind == "r-partite":
        (i,) = idx
        return (mem[i] & mask_of(w.detail["class"])).bit_count() != 1
    raise ValueError(f"unknown witness kind {w.kind!r}")
