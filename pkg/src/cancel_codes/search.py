"""Exact maximum family sizes at small n by depth-first branch and bound.

Every supported property is closed under taking subfamilies and is violated
only by some bounded set of members, so a family can be grown one member at a
time while keeping a *domain*: the remaining candidates that can still be
added without creating a violation. Adding member x shrinks the domain to the
candidates y for which no violating member set contains both x and y. The
size of the current family plus the size of the domain bounds every
extension.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from math import comb

from .errors import GroundSetTooLarge
from .family import SetFamily, Verdict
from .predicates import (
    is_cover_free,
    is_locally_thin,
    is_sparse,
    is_t_cancellative,
    is_t_star_cancellative,
)

MAX_CANDIDATES = 1 << 20


# -- properties -----------------------------------------------------------------

class Property:
    """A subfamily-closed property given by a test on small sets of distinct members."""

    label = "property"
    arities: tuple[int, ...] = ()

    def bad(self, members: tuple[int, ...]) -> bool:  # pragma: no cover - abstract
        raise NotImplementedError

    def check(self, F: SetFamily) -> Verdict:  # pragma: no cover - abstract
        raise NotImplementedError

    def violates_with(self, family: list[int], required: tuple[int, ...]) -> bool:
        """Whether some violating set inside ``family + required`` contains every required member."""
        need = len(required)
        for s in self.arities:
            extra = s - need
            if extra < 0 or extra > len(family):
                continue
            for rest in combinations(family, extra):
                if self.bad(required + rest):
                    return True
        return False


def _union(ms) -> int:
    u = 0
    for m in ms:
        u |= m
    return u


class Cancellative(Property):
    def __init__(self, t: int):
        self.t = t
        self.label = f"canc:{t}"
        self.arities = (t + 2,)

    def bad(self, members):
        for i, j in combinations(range(len(members)), 2):
            u = _union(m for k, m in enumerate(members) if k != i and k != j)
            if u | members[i] == u | members[j]:
                return True
        return False

    def violates_with(self, family, required):
        # specialised: role of the required members is fixed up front
        t = self.t
        if len(required) == 1:
            return super().violates_with(family, required)
        x, y = required
        for rest in combinations(family, t):
            u = _union(rest)
            # x and y are B and C
            if u | x == u | y:
                return True
            # x and y both among the A's; B, C drawn from rest
            for i, j in combinations(range(t), 2):
                U = _union(m for k, m in enumerate(rest) if k != i and k != j) | x | y
                if U | rest[i] == U | rest[j]:
                    return True
            # one of x, y among the A's, the other paired with a member of rest
            for i in range(t):
                others = _union(m for k, m in enumerate(rest) if k != i)
                U1 = others | x
                if U1 | y == U1 | rest[i]:
                    return True
                U2 = others | y
                if U2 | x == U2 | rest[i]:
                    return True
        return False

    def check(self, F):
        return is_t_cancellative(F, self.t)


class TStarCancellative(Property):
    def __init__(self, t: int):
        self.t = t
        self.label = f"tstar:{t}"
        self.arities = tuple(range(2, t + 3))

    def bad(self, members):
        s = len(members)
        if s - 1 <= self.t:
            for c in range(s):
                if members[c] & ~_union(m for k, m in enumerate(members) if k != c) == 0:
                    return True
        if s >= 3:
            for i, j in combinations(range(s), 2):
                u = _union(m for k, m in enumerate(members) if k != i and k != j)
                if u | members[i] == u | members[j]:
                    return True
        return False

    def check(self, F):
        return is_t_star_cancellative(F, self.t)


class CoverFree(Property):
    def __init__(self, g: int):
        self.g = g
        self.label = f"coverfree:{g}"
        self.arities = tuple(range(1, g + 2))

    def bad(self, members):
        for c in range(len(members)):
            if members[c] & ~_union(m for k, m in enumerate(members) if k != c) == 0:
                return True
        return False

    def check(self, F):
        return is_cover_free(F, self.g)


class Sparse(Property):
    def __init__(self, v: int, e: int):
        self.v, self.e = v, e
        self.label = f"sparse:{v}:{e}"
        self.arities = (e,)

    def bad(self, members):
        return _union(members).bit_count() <= self.v

    def violates_with(self, family, required):
        need = self.e - len(required)
        if need < 0 or need > len(family):
            return False
        base = _union(required)
        if base.bit_count() > self.v:
            return False
        # prune by union size while choosing the remaining members
        cands = [m for m in family if (base | m).bit_count() <= self.v]

        def rec(start, k, u):
            if k == 0:
                return True
            for idx in range(start, len(cands) - k + 1):
                nu = u | cands[idx]
                if nu.bit_count() <= self.v and rec(idx + 1, k - 1, nu):
                    return True
            return False

        return rec(0, need, base)

    def check(self, F):
        return is_sparse(F, self.v, self.e)


class LocallyThin(Property):
    def __init__(self, a: int, b: int):
        self.a, self.b = a, b
        self.label = f"thin:{a}:{b}"
        self.arities = (a,)

    def bad(self, members):
        seen1 = seen2 = 0
        for m in members:
            seen2 |= seen1 & m
            seen1 |= m
        return (seen1 & ~seen2).bit_count() < self.b

    def check(self, F):
        return is_locally_thin(F, self.a, self.b)


def parse_property(spec: str, t: int | None = None) -> Property:
    """``canc``, ``tstar``, ``coverfree`` (taking t from the argument or ``:t``), ``sparse:v:e``, ``thin:a:b``."""
    name, *args = spec.split(":")
    nums = [int(a) for a in args]
    if name in ("canc", "tstar", "coverfree"):
        val = nums[0] if nums else t
        if val is None:
            raise ValueError(f"property {name} needs a parameter")
        return {"canc": Cancellative, "tstar": TStarCancellative, "coverfree": CoverFree}[name](val)
    if name == "sparse" and len(nums) == 2:
        return Sparse(*nums)
    if name == "thin" and len(nums) == 2:
        return LocallyThin(*nums)
    raise ValueError(f"unknown property spec {spec!r}")


# -- search -------------------------------------------------------------------

@dataclass(frozen=True)
class SearchProblem:
    n: int
    prop: Property
    r: int | None = None  # None: all subsets of [n]
    node_budget: int | None = None
    time_budget: float | None = None

    def candidates(self) -> list[int]:
        """Ground set in colex order (ascending bit-mask value)."""
        if self.r is None:
            return list(range(1 << self.n))
        return sorted(sum(1 << v for v in c) for c in combinations(range(self.n), self.r))


@dataclass
class SearchResult:
    optimum: int
    witness_family: SetFamily
    status: str  # "exact" or "lower-bound"
    nodes: int
    elapsed: float = 0.0
    problem_label: str = ""
    extra: dict = field(default_factory=dict)


class _Budget(Exception):
    pass


def _root_branches(problem: SearchProblem, cands: list[int]) -> list[tuple[list[int], list[int]]]:
    """Symmetry-reduced starting points covering every non-empty family up to vertex relabelling.

    Branch s holds the families whose smallest member size is s; relabelling
    lets them contain {0, ..., s-1}.
    """
    prop = problem.prop
    sizes = [problem.r] if problem.r is not None else list(range(problem.n + 1))
    out = []
    for s in sizes:
        first = (1 << s) - 1
        if prop.violates_with([], (first,)):
            continue
        dom = [
            y for y in cands
            if y != first and y.bit_count() >= s
            and not prop.violates_with([], (y,))
            and not prop.violates_with([], (first, y))
        ]
        out.append(([first], dom))
    return out


class _Searcher:
    def __init__(self, prop: Property, node_budget, deadline):
        self.prop = prop
        self.node_budget = node_budget
        self.deadline = deadline
        self.nodes = 0
        self.best: list[int] = []

    def run(self, current: list[int], domain: list[int]) -> None:
        self.nodes += 1
        if self.node_budget is not None and self.nodes > self.node_budget:
            raise _Budget
        if self.deadline is not None and self.nodes % 1024 == 0 and time.monotonic() > self.deadline:
            raise _Budget
        if len(current) > len(self.best):
            self.best = list(current)
        best = len(self.best)
        size = len(current)
        for idx, x in enumerate(domain):
            if size + len(domain) - idx <= best:
                return
            rest = domain[idx + 1 :]
            new_domain = [y for y in rest if not self.prop.violates_with(current, (x, y))]
            if size + 1 + len(new_domain) > len(self.best):
                self.run(current + [x], new_domain)
            best = len(self.best)


def _run_branches(args):
    prop, branches, node_budget, deadline, best_known = args
    s = _Searcher(prop, node_budget, deadline)
    s.best = list(best_known)
    exhausted = False
    try:
        for cur, dom in branches:
            s.run(cur, dom)
    except _Budget:
        exhausted = True
    return s.best, s.nodes, exhausted


def max_family(problem: SearchProblem, threads: int = 1) -> SearchResult:
    """Largest family over the candidate ground set satisfying the property.

    The result is ``exact`` unless a node or time budget ran out, in which
    case it is a certified ``lower-bound`` (the witness still re-verifies).
    """
    n_cands = 1 << problem.n if problem.r is None else comb(problem.n, problem.r)
    if n_cands > MAX_CANDIDATES:
        raise GroundSetTooLarge(f"{n_cands} candidates exceed {MAX_CANDIDATES}")
    start = time.monotonic()
    deadline = start + problem.time_budget if problem.time_budget is not None else None
    cands = problem.candidates()
    branches = _root_branches(problem, cands)
    if threads <= 1 or len(branches) == 0:
        best, nodes, exhausted = _run_branches((problem.prop, branches, problem.node_budget, deadline, []))
    else:
        # split below the root: one subtree per (branch, first added member)
        subtrees = []
        for cur, dom in branches:
            subtrees.append((cur, []))
            for idx, x in enumerate(dom):
                nd = [y for y in dom[idx + 1 :] if not problem.prop.violates_with(cur, (x, y))]
                subtrees.append((cur + [x], nd))
        chunks = [subtrees[i::threads] for i in range(threads)]
        per = None if problem.node_budget is None else max(1, problem.node_budget // threads)
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_run_branches, [(problem.prop, c, per, deadline, []) for c in chunks]))
        best, nodes, exhausted = [], 0, False
        for b, nd, ex in results:
            nodes += nd
            exhausted |= ex
            if len(b) > len(best):
                best = b
    fam = SetFamily(problem.n, tuple(best), problem.r)
    assert problem.prop.check(fam), "search produced a family violating its property"
    return SearchResult(
        optimum=len(best),
        witness_family=fam,
        status="lower-bound" if exhausted else "exact",
        nodes=nodes,
        elapsed=time.monotonic() - start,
        problem_label=problem.prop.label,
    )


# -- named extremal quantities -------------------------------------------------------

def c_exact(n: int, t: int, **kw) -> SearchResult:
    """Largest t-cancellative code on n points."""
    return max_family(SearchProblem(n, Cancellative(t), None, kw.get("node_budget"), kw.get("time_budget")), kw.get("threads", 1))


def c_r_exact(n: int, r: int, t: int, **kw) -> SearchResult:
    """Largest r-uniform t-cancellative family on n points."""
    return max_family(SearchProblem(n, Cancellative(t), r, kw.get("node_budget"), kw.get("time_budget")), kw.get("threads", 1))


def c_star_exact(n: int, t: int, **kw) -> SearchResult:
    return max_family(SearchProblem(n, TStarCancellative(t), None, kw.get("node_budget"), kw.get("time_budget")), kw.get("threads", 1))


def C_exact(n: int, g: int, r: int | None = None, **kw) -> SearchResult:
    """Largest g-cover-free code (or r-uniform family when r is given)."""
    return max_family(SearchProblem(n, CoverFree(g), r, kw.get("node_budget"), kw.get("time_budget")), kw.get("threads", 1))


def f_exact(n: int, r: int, v: int, e: int, **kw) -> SearchResult:
    """Largest r-uniform family on n points with no e members spanned by v points."""
    return max_family(SearchProblem(n, Sparse(v, e), r, kw.get("node_budget"), kw.get("time_budget")), kw.get("threads", 1))
