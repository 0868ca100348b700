"""Command-line entry point: verify, construct, search, bound, goodset, report, replay.

Exit codes: 0 success or property holds, 1 property violated (or replay
mismatch), 2 usage or input-format error, 3 any other library error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

from . import __version__
from .bounds import (
    bound_c_n2_upper,
    bound_cancellative_uniform_upper,
    bound_eq_tstar,
    bound_tcanc_recursive,
    bound_tolhuizen_lower,
    bound_uniform_even,
    bound_uniform_odd,
    p_r,
    packing_ceiling,
    tolhuizen_c0,
    BoundReport,
)
from .errors import CancelCodesError, FormatError
from .family import SetFamily, format_fam, read_family, vertices_of
from .finite_field import field_new
from .predicates import (
    contains_G6_or_G7,
    default_threads,
    find_r_partition,
    is_cover_free,
    is_linear,
    is_locally_thin,
    is_sparse,
    is_t_cancellative,
    is_t_star_cancellative,
)

EXIT_OK, EXIT_VIOLATED, EXIT_USAGE, EXIT_ERROR = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _digest(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _threads(args) -> int:
    return args.threads if getattr(args, "threads", None) else default_threads()


def _emit(args, text: str, payload: dict | None = None) -> None:
    if getattr(args, "json", False) and payload is not None:
        print(json.dumps(payload, indent=2, sort_keys=True, default=str))
    else:
        print(text)


# -- verify ----------------------------------------------------------------------

def _check(F: SetFamily, spec: str, threads: int):
    name, *rest = spec.split(":")
    try:
        nums = [int(x) for x in rest]
    except ValueError:
        raise UsageError(f"bad property spec {spec!r}") from None
    arity = {"canc": 1, "tstar": 1, "coverfree": 1, "thin": 2, "linear": 0, "sparse": 2, "g6g7": 0, "rpartite": 1}
    if name not in arity or len(nums) != arity[name]:
        raise UsageError(f"bad property spec {spec!r}")
    if name == "canc":
        return is_t_cancellative(F, nums[0], threads=threads)
    if name == "tstar":
        return is_t_star_cancellative(F, nums[0])
    if name == "coverfree":
        return is_cover_free(F, nums[0])
    if name == "thin":
        return is_locally_thin(F, *nums)
    if name == "linear":
        return is_linear(F)
    if name == "sparse":
        return is_sparse(F, *nums)
    if name == "g6g7":
        found = contains_G6_or_G7(F)
        # the property checked is freeness, so the verdict flips
        return found._replace(holds=not found.holds)
    P = find_r_partition(F, nums[0])
    return P


def cmd_verify(args) -> int:
    args.inputs = [args.file]
    F = read_family(args.file)
    res = _check(F, args.property, _threads(args))
    if args.property.startswith("rpartite"):
        ok = res is not None
        classes = [list(c) for c in res.sets()] if ok else None
        text = f"holds {args.property}\npartition: " + " | ".join(" ".join(map(str, c)) for c in classes) if ok else f"violated {args.property}\nno partition found"
        _emit(args, text, {"property": args.property, "holds": ok, "partition": classes})
        return EXIT_OK if ok else EXIT_VIOLATED
    if res.holds:
        _emit(args, f"holds {args.property}", {"property": args.property, "holds": True})
        return EXIT_OK
    w = res.witness
    payload = {
        "property": args.property, "holds": False, "kind": w.kind, "indices": list(w.indices),
        "members": [list(vertices_of(F.members[i])) for i in w.indices],
        "detail": {k: list(v) for k, v in w.detail.items()},
    }
    _emit(args, f"violated {args.property}\n" + w.describe(F), payload)
    return EXIT_VIOLATED


# -- construct -------------------------------------------------------------------

def _need_seed(args) -> int:
    if args.seed is None:
        raise UsageError(f"construct {args.kind} is randomized and needs --seed")
    return args.seed


def cmd_construct(args) -> int:
    from .constructions import (
        construct_algebraic,
        construct_complete_r_partite,
        construct_hk_packing,
        construct_linear_4uniform,
        construct_tolhuizen,
    )

    meta: dict = {"construction": args.kind}
    if args.kind == "algebraic":
        if args.q is None or args.k is None:
            raise UsageError("algebraic needs --q and --k")
        seed = 0 if args.seed is None else args.seed
        S = None
        if args.set:
            f = field_new(args.q)
            S = [f.parse(tok) for tok in args.set.split(";")]
        code = construct_algebraic(args.q, args.k, S, rng_seed=seed)
        F = code.family
        meta.update(q=args.q, k=args.k, seed=seed, good_set=";".join(str(s) for s in code.S),
                    property="canc:2", verified=code.verified)
    elif args.kind == "tolhuizen":
        if args.n is None or args.r is None:
            raise UsageError("tolhuizen needs --n and --r")
        seed = _need_seed(args)
        code = construct_tolhuizen(args.n, args.r, seed, args.retries)
        F = code.best if args.coset else code.family
        meta.update(n=args.n, r=args.r, seed=seed, retries=args.retries, family_size=len(code.family),
                    target=code.target, meets_target=code.meets_target, attempt_sizes=list(code.attempt_sizes),
                    coset_label=code.best_label, coset_size=len(code.best),
                    emitted="best coset" if args.coset else "all nonsingular r-sets",
                    property="canc:1" if args.coset else None)
        if args.coset:
            meta["verified"] = bool(is_t_cancellative(F, 1))
    elif args.kind == "rpartite":
        if args.n is None or args.r is None:
            raise UsageError("rpartite needs --n and --r")
        F = construct_complete_r_partite(args.n, args.r)
        meta.update(n=args.n, r=args.r, p_r=p_r(args.n, args.r), property="canc:1", verified=bool(is_t_cancellative(F, 1)))
    elif args.kind == "packing4":
        if args.n is None:
            raise UsageError("packing4 needs --n")
        seed = _need_seed(args)
        F = construct_linear_4uniform(args.n, seed)
        meta.update(n=args.n, seed=seed, ceiling=packing_ceiling(args.n, 4), property="canc:2",
                    verified=bool(is_t_cancellative(F, 2)))
    else:
        if args.n is None or args.k is None:
            raise UsageError("hk needs --n and --k")
        seed = _need_seed(args)
        F = construct_hk_packing(args.n, args.k, args.mode, seed)
        meta.update(n=args.n, k=args.k, mode=args.mode, seed=seed, property="canc:2",
                    verified=bool(is_t_cancellative(F, 2)))
    meta.update(vertices=F.n, members=len(F), uniformity=F.uniformity())
    text = format_fam(F)
    if args.out:
        out = Path(args.out)
        out.write_text(text)
        side = out.with_name(out.name + ".json")
        side.write_text(json.dumps(meta, indent=2, sort_keys=True, default=str) + "\n")
        args.outputs = [str(out), str(side)]
        _emit(args, f"wrote {out} ({len(F)} members on {F.n} vertices)", meta)
    else:
        sys.stdout.write(text)
    args.seed_used = meta.get("seed")
    return EXIT_OK


# -- search ----------------------------------------------------------------------

def cmd_search(args) -> int:
    from .search import SearchProblem, max_family, parse_property

    try:
        prop = parse_property(args.property, args.t)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    problem = SearchProblem(args.n, prop, args.r, args.node_budget, args.time_budget)
    res = max_family(problem, threads=_threads(args))
    payload = {"optimum": res.optimum, "status": res.status, "nodes": res.nodes, "property": prop.label,
               "n": args.n, "r": args.r}
    _emit(args, f"{res.optimum} {res.status}\nnodes {res.nodes}", payload)
    if args.emit:
        Path(args.emit).write_text(format_fam(res.witness_family))
        args.outputs = [args.emit]
    return EXIT_OK


# -- bound -----------------------------------------------------------------------

def _req(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"--which {args.which} needs " + ", ".join("--" + m for m in missing))
    return [getattr(args, n) for n in names]


BOUND_NAMES = ["exp-t2", "uniform-even", "uniform-odd", "recursive", "coverfree", "pr", "c0",
               "random-matrix", "canc-upper", "packing"]
# short aliases kept for compatibility with existing scripts
BOUND_ALIASES = {"thm1": "exp-t2", "thm5": "uniform-even", "eq7": "uniform-odd", "thm2": "recursive",
                 "eq2": "coverfree", "thm8": "random-matrix"}


def _bound(args) -> BoundReport:
    w = args.which = BOUND_ALIASES.get(args.which, args.which)
    if w == "exp-t2":
        return bound_c_n2_upper(*_req(args, "n"))
    if w == "uniform-even":
        return bound_uniform_even(*_req(args, "n", "k"))
    if w == "uniform-odd":
        return bound_uniform_odd(*_req(args, "n", "k"))
    if w == "recursive":
        return bound_tcanc_recursive(*_req(args, "n", "t"))
    if w == "coverfree":
        n, t = _req(args, "n", "t")
        C = args.C
        if C is None:
            from .search import C_exact

            C = C_exact(n, t // 2).optimum
        return bound_eq_tstar(n, t, C)
    if w == "pr":
        n, r = _req(args, "n", "r")
        return BoundReport("p_r(n)", p_r(n, r), "complete r-partite", {"n": n, "r": r})
    if w == "c0":
        return tolhuizen_c0(args.tol)
    if w == "random-matrix":
        return bound_tolhuizen_lower(*_req(args, "n", "r"))
    if w == "canc-upper":
        return bound_cancellative_uniform_upper(*_req(args, "n", "r"))
    n, r = _req(args, "n", "r")
    return BoundReport("packing ceiling", packing_ceiling(n, r), "pair counting", {"n": n, "r": r})


def cmd_bound(args) -> int:
    rep = _bound(args)
    d = rep.to_dict()
    w = max(24, len(rep.label) + 1)
    lines = [f"{rep.label:<{w}} {d['value']}", f"{'source':<{w}} {rep.source}"]
    lines += [f"{k:<{w}} {v}" for k, v in rep.params.items()]
    if rep.error is not None:
        lines.append(f"{'error bound':<{w}} {d['error_bound']:.3e}")
    _emit(args, "\n".join(lines), d)
    return EXIT_OK


# -- goodset ---------------------------------------------------------------------

def cmd_goodset(args) -> int:
    from .poly import find_good_set

    gs = find_good_set(field_new(args.q), args.k, args.seed, args.max_tries)
    payload = {"q": args.q, "k": args.k, "seed": args.seed, "set": str(gs), "tried": gs.tried, "exhaustive": gs.exhaustive}
    _emit(args, f"{gs}\ntried {gs.tried}", payload)
    return EXIT_OK


# -- report ----------------------------------------------------------------------

def cmd_report(args) -> int:
    from .report import build_report

    paths = build_report(args.out_dir, args.n_max, args.uniform_n_max, threads=_threads(args))
    args.outputs = [str(p) for p in paths.values()]
    _emit(args, "\n".join(f"{k}: {p}" for k, p in paths.items()), {k: str(p) for k, p in paths.items()})
    return EXIT_OK


# -- replay ----------------------------------------------------------------------

def cmd_replay(args) -> int:
    man = json.loads(Path(args.manifest_file).read_text())
    before = man.get("outputs", {})
    code = _run(man["argv"], record=False)
    after = {p: _digest(p) for p in before if Path(p).exists()}
    same = code == man.get("exit_code", EXIT_OK) and after == before
    for p in sorted(before):
        print(f"{'same' if after.get(p) == before[p] else 'DIFFERENT'} {p}")
    print("replay identical" if same else "replay differs")
    return EXIT_OK if same else EXIT_VIOLATED


# -- parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--threads", type=int, default=None, help="worker processes (default: $CANCEL_CODES_THREADS or 1)")
    common.add_argument("--manifest", default=None, help="write a run manifest JSON here")

    p = argparse.ArgumentParser(prog="cancel-codes", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="check a family file against a property")
    v.add_argument("file")
    v.add_argument("--property", required=True,
                   help="canc:t, tstar:t, coverfree:g, thin:a:b, linear, sparse:v:e, g6g7, rpartite:r")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("construct", parents=[common], help="build a family")
    c.add_argument("kind", choices=["algebraic", "tolhuizen", "rpartite", "packing4", "hk"])
    c.add_argument("--q", type=int)
    c.add_argument("--k", type=int)
    c.add_argument("--n", type=int)
    c.add_argument("--r", type=int)
    c.add_argument("--set", help="good set as ';'-separated elements, each 'c0,c1,...'")
    c.add_argument("--seed", type=int)
    c.add_argument("--retries", type=int, default=20)
    c.add_argument("--coset", action="store_true", help="tolhuizen: emit the largest coset instead of the whole family")
    c.add_argument("--mode", choices=["disjoint", "greedy"], default="disjoint")
    c.add_argument("--out", help="write .fam here (plus <out>.json metadata); default stdout")
    c.set_defaults(func=cmd_construct)

    s = sub.add_parser("search", parents=[common], help="exact maximum family size")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--t", type=int)
    s.add_argument("--r", type=int)
    s.add_argument("--property", default="canc", help="canc, tstar, coverfree, sparse:v:e, thin:a:b")
    s.add_argument("--node-budget", type=int)
    s.add_argument("--time-budget", type=float)
    s.add_argument("--emit", help="write the witness family as .fam")
    s.set_defaults(func=cmd_search)

    b = sub.add_parser("bound", parents=[common], help="evaluate a closed-form bound")
    b.add_argument("--which", required=True,
                   choices=BOUND_NAMES + sorted(BOUND_ALIASES), metavar="{" + ",".join(BOUND_NAMES) + "}")
    b.add_argument("--n", type=int)
    b.add_argument("--k", type=int)
    b.add_argument("--r", type=int)
    b.add_argument("--t", type=int)
    b.add_argument("--C", type=int, help="coverfree: known cover-free size (default: computed exactly)")
    b.add_argument("--tol", type=float, default=1e-6)
    b.set_defaults(func=cmd_bound)

    g = sub.add_parser("goodset", parents=[common], help="find a good set in GF(q)")
    g.add_argument("--q", type=int, required=True)
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--max-tries", type=int, default=1000)
    g.set_defaults(func=cmd_goodset)

    rp = sub.add_parser("report", parents=[common], help="exact small-n tables as CSV plus a PNG figure")
    rp.add_argument("--out-dir", required=True)
    rp.add_argument("--n-max", type=int, default=5)
    rp.add_argument("--uniform-n-max", type=int, default=7)
    rp.set_defaults(func=cmd_report)

    rr = sub.add_parser("replay", help="re-run a manifest and compare output digests")
    rr.add_argument("manifest_file")
    rr.set_defaults(func=cmd_replay)
    return p


def _strip_manifest(argv: list[str]) -> list[str]:
    out, skip = [], False
    for a in argv:
        if skip:
            skip = False
            continue
        if a == "--manifest":
            skip = True
            continue
        if a.startswith("--manifest="):
            continue
        out.append(a)
    return out


def _run(argv: list[str], record: bool = True) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and EXIT_USAGE
    args.inputs, args.outputs = [], []
    start = time.monotonic()
    try:
        code = args.func(args)
    except (UsageError, FormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CancelCodesError, ValueError, RuntimeError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if record and getattr(args, "manifest", None):
        params = {k: v for k, v in vars(args).items() if k not in ("func", "inputs", "outputs", "manifest", "seed_used")}
        manifest = {
            "subcommand": args.command,
            "argv": _strip_manifest(argv),
            "params": params,
            "seed": getattr(args, "seed_used", getattr(args, "seed", None)),
            "version": __version__,
            "inputs": {p: _digest(p) for p in args.inputs},
            "outputs": {p: _digest(p) for p in args.outputs},
            "exit_code": code,
            "wall_time": round(time.monotonic() - start, 6),
        }
        Path(args.manifest).write_text(json.dumps(manifest, indent=2, sort_keys=True, default=str) + "\n")
    return code


def main(argv: list[str] | None = None) -> int:
    return _run(list(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    raise SystemExit(main())
