"""Subfamily extractions used to move between 3-uniform 2-cancellative and (7,4)-sparse families."""

from __future__ import annotations

import random
from fractions import Fraction
from math import ceil, factorial

from .errors import NotSparse, NotUniform
from .family import SetFamily, VertexPartition, vertices_of
from .predicates import is_linear, is_sparse


def trim_degree_one(F: SetFamily) -> SetFamily:
    """Repeatedly drop the lowest-index member that has a vertex of degree one.

    At the fixpoint every vertex has degree 0 or at least 2. Member order is kept.
    """
    alive = list(range(len(F)))
    mem = F.members
    while True:
        deg: dict[int, int] = {}
        for i in alive:
            for v in vertices_of(mem[i]):
                deg[v] = deg.get(v, 0) + 1
        drop = next((i for i in alive if any(deg[v] == 1 for v in vertices_of(mem[i]))), None)
        if drop is None:
            return F.subfamily(alive)
        alive.remove(drop)


def sparse_to_linear(H: SetFamily) -> SetFamily:
    """Linear subfamily of a 3-uniform (7,4)-sparse family losing at most 2n/5 members.

    Members sharing two vertices form groups of at most three, each isolated
    from the rest by sparsity. From a group of three two members are removed,
    from a pair one; the lowest-index member of each group survives.
    """
    if any(m.bit_count() != 3 for m in H.members):
        raise NotUniform("sparse_to_linear needs a 3-uniform family")
    if not is_sparse(H, 7, 4):
        raise NotSparse("family is not (7,4)-sparse")
    mem = H.members
    N = len(mem)
    partners = [[j for j in range(N) if j != i and (mem[i] & mem[j]).bit_count() == 2] for i in range(N)]
    removed: set[int] = set()
    # first pass: members with two partners lead a 3-member group
    for i in range(N):
        if len(partners[i]) >= 2 and i not in removed:
            group = sorted({i, *partners[i]})
            removed.update(group[1:])
    # second pass: remaining pairs
    for i in range(N):
        if i in removed:
            continue
        for j in partners[i]:
            if j not in removed:
                removed.add(max(i, j))
    out = H.subfamily(i for i in range(N) if i not in removed)
    assert is_linear(out), "sparse_to_linear produced a non-linear family"
    return out


def erdos_kleitman_reduce(F: SetFamily, r: int, rng_seed: int = 0, max_rounds: int = 100000) -> tuple[SetFamily, VertexPartition]:
    """An r-partite subfamily with at least ceil(r!/r^r * |F|) members.

    Random r-colourings of the vertices are drawn until the members with all
    colours distinct are numerous enough; such a colouring always exists.
    """
    if any(m.bit_count() != r for m in F.members):
        raise NotUniform(f"family is not {r}-uniform")
    target = ceil(Fraction(factorial(r), r**r) * len(F))
    rng = random.Random(rng_seed)
    full = (1 << r) - 1
    for _ in range(max_rounds):
        colour = [rng.randrange(r) for _ in range(F.n)]
        keep = []
        for i, m in enumerate(F.members):
            seen = 0
            for v in vertices_of(m):
                seen |= 1 << colour[v]
            if seen == full:
                keep.append(i)
        if len(keep) >= target:
            classes = [0] * r
            for v, c in enumerate(colour):
                classes[c] |= 1 << v
            return F.subfamily(keep), VertexPartition(tuple(classes))
    raise RuntimeError("no qualifying colouring found within max_rounds")  # pragma: no cover


def cancellative_to_sparse(F: SetFamily, rng_seed: int = 0) -> tuple[SetFamily, SetFamily]:
    """Trim degree-one members, then keep a 3-partite part.

    For a 3-uniform 2-cancellative F the first result is linear (when it has
    at least four members) and the second is (7,4)-sparse with at least
    2/9 of the first's size.
    """
    trimmed = trim_degree_one(F)
    partite, _ = erdos_kleitman_reduce(trimmed, 3, rng_seed)
    return trimmed, partite
