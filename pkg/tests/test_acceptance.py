"""End-to-end acceptance criteria.

Each ``criterion_N`` returns ``(ok, detail)`` without raising; the pytest
wrappers print one PASS/FAIL line per criterion and then assert.  Running this
file directly prints the same lines for all criteria:

    python3 tests/test_acceptance.py
"""
from __future__ import annotations

import contextlib
import io
import random
import sys
import time
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from math import ceil, comb

import pytest

from cancel_codes import cli
from cancel_codes.bounds import (
    _tcanc_direct,
    _tcanc_logdomain,
    bound_eq_tstar,
    bound_tcanc_recursive,
    bound_uniform,
    bound_uniform_even,
    bound_uniform_odd,
    p_r,
    tolhuizen_c0,
)
from cancel_codes.constructions import (
    HkGraph,
    construct_algebraic,
    construct_hk_packing,
    construct_linear_4uniform,
    tolhuizen_trials,
)
from cancel_codes.errors import OutOfRegime, SearchExhausted
from cancel_codes.family import SetFamily, parse_fam
from cancel_codes.finite_field import field_new
from cancel_codes.poly import find_good_set
from cancel_codes.predicates import contains_G6_or_G7, is_linear, is_sparse, is_t_cancellative
from cancel_codes.search import C_exact, c_exact, c_r_exact, c_star_exact

NODE_BUDGET = 10**8


def _fmt(seconds: float) -> str:
    return f"{seconds:.1f}s"


# -- 1: algebraic k = 2 -------------------------------------------------------------

def _bruteforce_2cancellative(members: tuple[int, ...]) -> bool:
    """Every 4 members, every choice of the pair {B, C}: A1|A2|B != A1|A2|C."""
    for quad in combinations(members, 4):
        for b, c in combinations(range(4), 2):
            a1, a2 = (quad[i] for i in range(4) if i not in (b, c))
            u = a1 | a2
            if u | quad[b] == u | quad[c]:
                return False
    return True


def criterion_1():
    start = time.monotonic()
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = cli.main(["construct", "algebraic", "--q", "5", "--k", "2"])
    F = parse_fam(buf.getvalue())
    ok_shape = code == 0 and len(F) == 25 and F.uniformity() == 4 and F.n == 20
    ok_canc = _bruteforce_2cancellative(F.members)
    elapsed = time.monotonic() - start
    ok = ok_shape and ok_canc and elapsed < 5
    return ok, (f"{len(F)} members, {F.uniformity()}-uniform, {F.n} vertices, "
                f"brute force over {comb(25, 4)} quadruples {'ok' if ok_canc else 'FAILED'}, {_fmt(elapsed)}")


# -- 2: algebraic k = 3 ---------------------------------------------------------------

@lru_cache(maxsize=None)
def _k3_outcome():
    """(smallest q >= 7 with a good 6-set, per-q notes, the family, seconds spent at q <= 9)."""
    notes = []
    small_time = 0.0
    for q in (7, 8, 9, 11):
        start = time.monotonic()
        try:
            gs = find_good_set(field_new(q), 3, rng_seed=0)
        except SearchExhausted:
            if q <= 9:
                small_time += time.monotonic() - start
            notes.append(f"q={q}: none")
            continue
        code = construct_algebraic(q, 3, gs.elements, verify=False)
        return q, notes + [f"q={q}: {gs}"], code.family, small_time
    return None, notes, None, small_time


def criterion_2():
    start = time.monotonic()
    q, notes, F, small_time = _k3_outcome()
    if F is None:
        return False, "; ".join(notes) + "; no good set for q <= 11"
    # q = 7 must have been ruled out by the exhaustive scan
    try:
        find_good_set(field_new(7), 3, rng_seed=0)
        exhaustive7 = False
    except SearchExhausted:
        exhaustive7 = True
    verdict = is_t_cancellative(F, 2)
    ok = (exhaustive7 and F is not None and len(F) == q**3 and F.uniformity() == 6
          and bool(verdict) and small_time < 300)
    return ok, (f"{'; '.join(notes)}; {len(F)} members {F.uniformity()}-uniform on {F.n} vertices, "
                f"2-cancellative={bool(verdict)}, q<=9 scans {_fmt(small_time)}, "
                f"total {_fmt(time.monotonic() - start)}")


# -- 3: exact anchors --------------------------------------------------------------

def criterion_3():
    start = time.monotonic()
    checks = []
    for n in (4, 5, 6):
        checks.append((f"c_2({n},2)", c_r_exact(n, 2, 2, node_budget=NODE_BUDGET), n - 1))
    for n in (4, 5):
        checks.append((f"c_2({n},1)", c_r_exact(n, 2, 1, node_budget=NODE_BUDGET), n * n // 4))
    for n in (4, 5):
        checks.append((f"c_3({n},1)", c_r_exact(n, 3, 1, node_budget=NODE_BUDGET), 2 ** (n - 3)))
    checks.append(("c_3(6,1)", c_r_exact(6, 3, 1, node_budget=NODE_BUDGET), 8))
    bad = [f"{name}={res.optimum}({res.status})!={want}" for name, res, want in checks
           if res.status != "exact" or res.optimum != want]
    elapsed = time.monotonic() - start
    ok = not bad and p_r(6, 3) == 8 and elapsed < 600
    return ok, (f"{len(checks) - len(bad)}/{len(checks)} anchors exact, {_fmt(elapsed)}"
                + (": " + ", ".join(bad) if bad else ""))


# -- 4: inequality chains --------------------------------------------------------------

def criterion_4():
    chain_bad, cf_bad = [], []
    for n in range(1, 6):
        for t in (1, 2, 3):
            C_t = C_exact(n, t).optimum
            cs = c_star_exact(n, t).optimum
            C_t1 = C_exact(n, t + 1).optimum
            c = c_exact(n, t).optimum
            if not (C_t <= cs <= C_t1 <= c):
                chain_bad.append(f"n={n},t={t}: C={C_t} c*={cs} C'={C_t1} c={c}")
            cf = bound_eq_tstar(n, t, C_exact(n, t // 2).optimum).value
            if not c <= cf:
                cf_bad.append(f"n={n},t={t}: c={c} > {cf}")
    ok = not chain_bad and not cf_bad
    detail = (f"chain violated in {len(chain_bad)}/15 cases" + (" [" + "; ".join(chain_bad) + "]" if chain_bad else "")
              + f", second bound violated in {len(cf_bad)}/15 cases" + (" [" + "; ".join(cf_bad) + "]" if cf_bad else ""))
    return ok, detail


# -- 5: three equivalent predicates on linear 3-partite triple systems ----------------

def _partite_triples(part: int) -> list[int]:
    parts = [range(i * part, (i + 1) * part) for i in range(3)]
    return [(1 << a) | (1 << b) | (1 << c) for a, b, c in product(*parts)]


def _agree(F: SetFamily) -> bool:
    a = bool(is_t_cancellative(F, 2))
    b = not contains_G6_or_G7(F)
    c = bool(is_sparse(F, 7, 4))
    return a == b == c


def criterion_5():
    start = time.monotonic()
    triples = _partite_triples(2)
    exhaustive = disagree = 0
    for mask in range(1 << len(triples)):
        F = SetFamily(6, tuple(m for i, m in enumerate(triples) if mask >> i & 1), 3)
        if not is_linear(F):
            continue
        exhaustive += 1
        disagree += not _agree(F)
    rng = random.Random(2024)
    pool = _partite_triples(3)
    sampled = 0
    while sampled < 10_000:
        order = rng.sample(pool, len(pool))
        goal = rng.randrange(0, 10)
        chosen: list[int] = []
        for m in order:
            if len(chosen) >= goal:
                break
            if all(bin(m & x).count("1") <= 1 for x in chosen):
                chosen.append(m)
        sampled += 1
        disagree += not _agree(SetFamily(9, tuple(chosen), 3))
    elapsed = time.monotonic() - start
    ok = disagree == 0 and elapsed < 120
    return ok, f"{exhaustive} exhaustive + {sampled} random families, {disagree} disagreements, {_fmt(elapsed)}"


# -- 6: random binary matrices ------------------------------------------------------

def criterion_6():
    start = time.monotonic()
    target = ceil(Fraction(288788, 10**6) * comb(12, 4))
    sizes, bad_cosets = [], 0
    for code in tolhuizen_trials(12, 4, rng_seed=0, retries=20):
        sizes.append(len(code.family))
        bad_cosets += sum(not is_t_cancellative(F, 1) for F in code.cosets.values())
    c0 = tolhuizen_c0(1e-6)
    c0_ok = c0.error < 1e-6 and round(float(c0.value), 4) == round(0.288788, 4)
    ok = target == 143 and max(sizes) >= 143 and bad_cosets == 0 and c0_ok
    return ok, (f"best of {len(sizes)} matrices {max(sizes)} >= {target}, {bad_cosets} non-cancellative cosets, "
                f"c0={float(c0.value):.6f} (+-{float(c0.error):.1e}), {_fmt(time.monotonic() - start)}")


# -- 7: the even/odd uniform bound dominates everything we can build or solve ----------

def _uniform_families():
    """Verified 2-cancellative uniform families from every construction."""
    out = []
    for q in (4, 5, 7, 8, 9):
        out.append((f"algebraic q={q} k=2", construct_algebraic(q, 2, rng_seed=0).family))
    _, _, F, _ = _k3_outcome()
    if F is not None:
        out.append(("algebraic k=3", F))
    for n in (4, 7, 9, 13, 16, 20, 25):
        out.append((f"packing4 n={n}", construct_linear_4uniform(n, rng_seed=n)))
    for k in (3, 4, 5):
        for mode in ("disjoint", "greedy"):
            n = 3 * HkGraph(k).vertex_count + 2
            out.append((f"hk k={k} {mode}", construct_hk_packing(n, k, mode, rng_seed=k, tries=300)))
    return out


def criterion_7():
    start = time.monotonic()
    bad, compared = [], 0
    for name, F in _uniform_families():
        if not is_t_cancellative(F, 2):
            bad.append(f"{name} not 2-cancellative")
            continue
        r = F.uniformity()
        bound = bound_uniform(F.n, r).value
        compared += 1
        if not Fraction(len(F)) <= bound:
            bad.append(f"{name}: {len(F)} > {bound}")
    for r, n_max in ((2, 9), (3, 8), (4, 8)):
        for n in range(r, n_max + 1):
            res = c_r_exact(n, r, 2, node_budget=NODE_BUDGET)
            bound = bound_uniform(n, r).value
            compared += 1
            if res.status != "exact" or not Fraction(res.optimum) <= bound:
                bad.append(f"c_{r}({n},2)={res.optimum} vs {bound}")
    # the two parities of the bound are exact rationals
    exact = all(isinstance(bound_uniform_even(n, k).value, Fraction) and isinstance(bound_uniform_odd(n, k).value, Fraction)
                for n in range(2, 20) for k in range(1, 4))
    ok = not bad and exact
    return ok, f"{compared} comparisons, {len(bad)} violations, {_fmt(time.monotonic() - start)}" + (
        ": " + "; ".join(bad) if bad else "")


# -- 8: asymptotic statements -----------------------------------------------------------

def criterion_8():
    checks = []
    try:
        bound_tcanc_recursive(50, 3)
        checks.append(False)
    except OutOfRegime:
        checks.append(True)
    for t, n in ((3, 51), (4, 73), (5, 99)):
        a, b = _tcanc_direct(n, t), _tcanc_logdomain(n, t)
        checks.append(abs(a - b) / a < 1e-30)
    ok = all(checks)
    return ok, "numeric asymptotics not reproducible at this scale; regime guard and formula self-consistency checked"


CRITERIA = {i: globals()[f"criterion_{i}"] for i in range(1, 9)}


def _line(num: int) -> tuple[bool, str]:
    try:
        ok, detail = CRITERIA[num]()
    except Exception as exc:  # a crash is a failure, reported on the same line
        ok, detail = False, f"raised {type(exc).__name__}: {exc}"
    return ok, f"criterion {num}: {'PASS' if ok else 'FAIL'} - {detail}"


@pytest.mark.parametrize("num", sorted(CRITERIA))
def test_criterion(num, capsys):
    ok, line = _line(num)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [_line(i) for i in sorted(CRITERIA)]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
