"""Small-n tables of exact optima against closed-form bounds, written as CSV plus PNG figures."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

from .bounds import bound_eq_tstar, bound_uniform, p_r
from .search import C_exact, c_exact, c_r_exact, c_star_exact

NONUNIFORM_FIELDS = ["n", "t", "C_t", "cstar_t", "C_t1", "c_t", "coverfree_bound", "chain_as_stated", "chain_reversed", "coverfree_bound_holds"]
UNIFORM_FIELDS = ["r", "t", "n", "exact", "status", "upper_bound", "partite_lower"]


@dataclass
class ReportTables:
    nonuniform: list[dict]
    uniform: list[dict]


def nonuniform_table(n_max: int = 5, t_values=(1, 2, 3), threads: int = 1) -> list[dict]:
    """Exact C(n, g), c*(n, t) and c(n, t) for every n <= n_max, with the chain checks per row."""
    rows = []
    for n in range(1, n_max + 1):
        C = {g: C_exact(n, g, threads=threads).optimum for g in range(0, max(t_values) + 2)}
        for t in t_values:
            cs = c_star_exact(n, t, threads=threads).optimum
            c = c_exact(n, t, threads=threads).optimum
            cf = bound_eq_tstar(n, t, C[t // 2]).value
            rows.append({
                "n": n, "t": t, "C_t": C[t], "cstar_t": cs, "C_t1": C[t + 1], "c_t": c, "coverfree_bound": cf,
                "chain_as_stated": C[t] <= cs <= C[t + 1] <= c,
                "chain_reversed": C[t + 1] <= cs <= C[t] and C[t + 1] <= c,
                "coverfree_bound_holds": c <= cf,
            })
    return rows


def uniform_table(n_max: int = 7, r_values=(2, 3, 4), t_values=(1, 2), threads: int = 1) -> list[dict]:
    rows = []
    for r in r_values:
        for t in t_values:
            for n in range(r, n_max + 1):
                res = c_r_exact(n, r, t, threads=threads)
                upper = bound_uniform(n, r).value if t == 2 else None
                lower = p_r(n, r) if t == 1 and r >= 2 else None
                rows.append({
                    "r": r, "t": t, "n": n, "exact": res.optimum, "status": res.status,
                    "upper_bound": "" if upper is None else float(upper),
                    "partite_lower": "" if lower is None else lower,
                })
    return rows


def write_csv(rows: list[dict], fields: list[str], path: Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow({k: row[k] for k in fields})


def plot_tables(tables: ReportTables, path: Path) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, axes = plt.subplots(1, 2, figsize=(11, 4.2))
    ax = axes[0]
    for r in sorted({row["r"] for row in tables.uniform}):
        pts = [row for row in tables.uniform if row["r"] == r and row["t"] == 2]
        ns = [p["n"] for p in pts]
        line, = ax.plot(ns, [p["exact"] for p in pts], "o-", label=f"exact, r={r}")
        ax.plot(ns, [p["upper_bound"] for p in pts], "--", color=line.get_color(), label=f"bound, r={r}")
    ax.set_xlabel("n")
    ax.set_ylabel("largest 2-cancellative r-uniform family")
    ax.legend(fontsize=8)

    ax = axes[1]
    for t in sorted({row["t"] for row in tables.nonuniform}):
        pts = [row for row in tables.nonuniform if row["t"] == t]
        ns = [p["n"] for p in pts]
        line, = ax.plot(ns, [p["c_t"] for p in pts], "o-", label=f"c(n,{t})")
        ax.plot(ns, [p["cstar_t"] for p in pts], "s:", color=line.get_color(), label=f"c*(n,{t})")
        ax.plot(ns, [p["C_t"] for p in pts], "^--", color=line.get_color(), alpha=0.6, label=f"C(n,{t})")
    ax.set_xlabel("n")
    ax.set_ylabel("exact optimum")
    ax.set_yscale("log", base=2)
    ax.legend(fontsize=7, ncol=3)
    fig.tight_layout()
    # fixed metadata keeps the file byte-stable between runs
    fig.savefig(path, dpi=100, metadata={"Software": None})
    plt.close(fig)


def build_report(out_dir: str | Path, n_max: int = 5, uniform_n_max: int = 7, threads: int = 1) -> dict[str, Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    tables = ReportTables(nonuniform_table(n_max, threads=threads), uniform_table(uniform_n_max, threads=threads))
    paths = {
        "nonuniform": out / "nonuniform.csv",
        "uniform": out / "uniform.csv",
        "figure": out / "optima.png",
    }
    write_csv(tables.nonuniform, NONUNIFORM_FIELDS, paths["nonuniform"])
    write_csv(tables.uniform, UNIFORM_FIELDS, paths["uniform"])
    plot_tables(tables, paths["figure"])
    return paths

