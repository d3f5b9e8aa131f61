"""Command-line harness: experiment orchestration, seed management, CSV/JSON output.

Subcommands
-----------
theory     closed-form prediction for one (n, tau, Yr, Yb), JSON or CSV
compete    full competition runs on sampled graphs, one CSV row per run
distances  measured vs predicted source distance over an n-grid, summary CSV
coloring   root-color probabilities of the tree coloring scheme over a grid
bp-limit   growth-rate estimates of the branching process at nested thresholds

Reproducibility contract: every command requires an explicit --seed; trial i
uses the PCG64 generator spawned from SeedSequence(seed, spawn_key=(i,)), so
reruns with the same configuration and seed produce byte-identical output
(rows are canonically ordered by run id before writing) regardless of --jobs.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._rng import spawn_rng
from .coloring import gamma_sweep
from .competition import BLUE, RED, classify_outcome, extract_growth, run_competition
from .branching import nested_y_estimates
from .graph import bfs_layers, sample_degree_sequence, uniform_matching
from .powerlaw import DegreeLaw, mean_degree
from .theory import NO_COEXIST, TheoryInput, predict

COMPETE_COLUMNS = [
    "run_id", "seed", "n", "tau", "rho", "Yr_n", "Yb_n", "q", "T_r", "T_b",
    "b_r", "b_b", "case", "regime", "predicted_distance", "measured_distance",
    "B_inf", "R_inf", "uncolored", "max_blue_degree",
    "blue_mass_exponent_pred", "blue_mass_exponent_meas", "Ln_ok",
    "runtime_ms", "degenerate",
]

DISTANCE_COLUMNS = [
    "n", "tau", "rho", "pairs", "used", "mean_abs_error",
    "frac_within_1", "frac_exact", "degenerate_fraction",
]

COLORING_COLUMNS = ["gamma", "Q", "rule", "trials", "p_blue", "p_red",
                    "ci_halfwidth", "censored_fraction"]

BP_LIMIT_COLUMNS = ["threshold", "trials", "censored_fraction", "mean", "median",
                    "q10", "q90", "tail_frac_4", "tail_frac_6", "tail_frac_8",
                    "mean_abs_diff_vs_largest"]


@dataclass(frozen=True)
class CompeteConfig:
    n: int
    tau: float
    rho: float
    trials: int
    seed: int
    tie_blue_prob: float = 0.5
    jobs: int = 1


def _pick_sources(rng: np.random.Generator, n: int):
    r0 = int(rng.integers(n))
    b0 = int(rng.integers(n))
    while b0 == r0:
        b0 = int(rng.integers(n))
    return r0, b0


def compete_trial(cfg: CompeteConfig, run_id: int) -> dict:
    """One full run: graph, growth extraction, competition, classification, prediction."""
    t0 = time.perf_counter()
    rng = spawn_rng(cfg.seed, run_id)
    law = DegreeLaw(cfg.tau)
    degseq = sample_degree_sequence(cfg.n, law, rng)
    graph = uniform_matching(degseq, rng)
    r0, b0 = _pick_sources(rng, cfg.n)
    trace = extract_growth(graph, r0, b0, cfg.rho, cfg.tau)
    result = run_competition(graph, r0, b0, cfg.tie_blue_prob, rng)
    mean_d = mean_degree(law)
    ln_ok = int(mean_d / 2.0 <= graph.total_half_edges / cfg.n <= 2.0 * mean_d)
    row = {c: "" for c in COMPETE_COLUMNS}
    row.update(run_id=run_id, seed=cfg.seed, n=cfg.n, tau=cfg.tau, rho=cfg.rho,
               B_inf=result.blue_count, R_inf=result.red_count,
               uncolored=result.uncolored_count, Ln_ok=ln_ok, degenerate=int(trace.degenerate))
    if not trace.degenerate:
        outcome = classify_outcome(result, trace, cfg.tau, graph)
        row.update(Yr_n=trace.y_red, Yb_n=trace.y_blue, q=outcome.q,
                   measured_distance=outcome.measured_distance,
                   max_blue_degree=outcome.max_loser_degree,
                   blue_mass_exponent_meas=outcome.loser_log_mass_over_log_n)
        try:
            pred = predict(TheoryInput(cfg.n, cfg.tau, trace.y_red, trace.y_blue, cfg.rho))
        except ValueError:
            row["degenerate"] = 1  # measured rate outside the predictor's domain
        else:
            row.update(T_r=pred.t_red, T_b=pred.t_blue, b_r=pred.b_red, b_b=pred.b_blue,
                       case=pred.case or "", regime=pred.regime,
                       predicted_distance=pred.distance)
            if pred.regime == NO_COEXIST:
                row["blue_mass_exponent_pred"] = pred.blue_mass_exponent
    row["runtime_ms"] = round(1000.0 * (time.perf_counter() - t0), 3)
    return row


def run_compete(cfg: CompeteConfig) -> list[dict]:
    rows = _map_trials(_compete_worker, cfg, cfg.trials, cfg.jobs)
    return sorted(rows, key=lambda r: r["run_id"])


def _compete_worker(args) -> dict:
    return compete_trial(*args)


def distance_trial(cfg: CompeteConfig, run_id: int) -> dict:
    """Distance-only run: no competition, just measurement and prediction."""
    rng = spawn_rng(cfg.seed, run_id)
    law = DegreeLaw(cfg.tau)
    degseq = sample_degree_sequence(cfg.n, law, rng)
    graph = uniform_matching(degseq, rng)
    r0, b0 = _pick_sources(rng, cfg.n)
    trace = extract_growth(graph, r0, b0, cfg.rho, cfg.tau)
    dist, _ = bfs_layers(graph, r0)
    measured = int(dist[b0])
    out = {"run_id": run_id, "measured": measured, "predicted": -1, "degenerate": True}
    if not trace.degenerate and measured >= 1:
        try:
            pred = predict(TheoryInput(cfg.n, cfg.tau, trace.y_red, trace.y_blue, cfg.rho))
        except ValueError:
            return out
        out.update(predicted=pred.distance, degenerate=False)
    return out


def _distance_worker(args) -> dict:
    return distance_trial(*args)


def _map_trials(worker, cfg, trials: int, jobs: int) -> list:
    tasks = [(cfg, i) for i in range(trials)]
    if jobs <= 1:
        return [worker(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(worker, tasks, chunksize=max(1, trials // (8 * jobs))))


def distance_summary(cfg: CompeteConfig) -> dict:
    rows = _map_trials(_distance_worker, cfg, cfg.trials, cfg.jobs)
    ok = [r for r in rows if not r["degenerate"]]
    errs = np.array([abs(r["measured"] - r["predicted"]) for r in ok], dtype=float)
    return {
        "n": cfg.n, "tau": cfg.tau, "rho": cfg.rho, "pairs": cfg.trials,
        "used": len(ok),
        "mean_abs_error": float(errs.mean()) if len(ok) else math.nan,
        "frac_within_1": float(np.mean(errs <= 1)) if len(ok) else math.nan,
        "frac_exact": float(np.mean(errs == 0)) if len(ok) else math.nan,
        "degenerate_fraction": 1.0 - len(ok) / max(1, cfg.trials),
    }


def canonical_output(csv_text: str) -> str:
    """Canonical form of a command's CSV output for reproducibility checks.

    Rows are sorted by their first column (the run id where present) and the
    wall-clock ``runtime_ms`` column, the only field that legitimately varies
    between reruns, is blanked.  Two runs of the same command with the same
    configuration and seed must agree byte-for-byte after this normalization.
    """
    lines = csv_text.strip().splitlines()
    header = lines[0].split(",")
    rows = [line.split(",") for line in lines[1:]]
    rows.sort(key=lambda r: r[0])
    if "runtime_ms" in header:
        i = header.index("runtime_ms")
        for r in rows:
            r[i] = ""
    return "\n".join([",".join(header)] + [",".join(r) for r in rows]) + "\n"


def _write_csv(path, columns, rows) -> None:
    out = open(path, "w", newline="") if path else sys.stdout
    try:
        w = csv.writer(out)
        w.writerow(columns)
        for r in rows:
            w.writerow([_fmt(r.get(c, "")) for c in columns])
    finally:
        if path:
            out.close()


def _fmt(v):
    if isinstance(v, float):
        if math.isnan(v):
            return ""
        return repr(v)
    return v


def _sanitize(obj):
    if isinstance(obj, float) and (math.isnan(obj) or math.isinf(obj)):
        return None
    if isinstance(obj, dict):
        return {k: _sanitize(v) for k, v in obj.items()}
    return obj


def cmd_theory(args) -> int:
    pred = predict(TheoryInput(args.n, args.tau, args.yr, args.yb, args.rho))
    payload = _sanitize(pred.to_dict())
    if args.csv:
        cols = list(payload)
        _write_csv(args.out, cols, [{k: ("" if v is None else v) for k, v in payload.items()}])
    else:
        text = json.dumps(payload, indent=2)
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text + "\n")
        else:
            print(text)
    return 0


def cmd_compete(args) -> int:
    cfg = CompeteConfig(n=args.n, tau=args.tau, rho=args.rho, trials=args.trials,
                        seed=args.seed, tie_blue_prob=args.tie_blue_prob, jobs=args.jobs)
    _write_csv(args.out, COMPETE_COLUMNS, run_compete(cfg))
    return 0


def cmd_distances(args) -> int:
    rows = []
    for n in args.n_grid:
        cfg = CompeteConfig(n=n, tau=args.tau, rho=args.rho, trials=args.trials,
                            seed=args.seed, jobs=args.jobs)
        rows.append(distance_summary(cfg))
    _write_csv(args.out, DISTANCE_COLUMNS, rows)
    return 0


def cmd_coloring(args) -> int:
    rows = gamma_sweep(args.tau, args.rule, args.q_grid, args.gamma_grid,
                       args.trials, args.seed)
    for r in rows:
        if r["censored_fraction"] > 0.05:
            print(f"warning: censored fraction {r['censored_fraction']:.3f} "
                  f"in cell gamma={r['gamma']} Q={r['Q']}", file=sys.stderr)
    _write_csv(args.out, COLORING_COLUMNS, rows)
    return 0


def cmd_bp_limit(args) -> int:
    thresholds = sorted(args.thresholds)
    per_threshold = {t: [] for t in thresholds}
    censored = 0
    for i in range(args.trials):
        ests = nested_y_estimates(args.tau, args.root_law, thresholds,
                                  seed_or_rng=spawn_rng(args.seed, i))
        if ests is None:
            censored += 1
            continue
        for est in ests:
            per_threshold[est.threshold].append(est.value)
    largest = np.asarray(per_threshold[thresholds[-1]])
    rows = []
    for t in thresholds:
        vals = np.asarray(per_threshold[t])
        diff = float(np.mean(np.abs(vals - largest))) if len(vals) == len(largest) else math.nan
        rows.append({
            "threshold": t, "trials": args.trials,
            "censored_fraction": censored / args.trials,
            "mean": float(vals.mean()), "median": float(np.median(vals)),
            "q10": float(np.quantile(vals, 0.1)), "q90": float(np.quantile(vals, 0.9)),
            "tail_frac_4": float(np.mean(vals > 4)), "tail_frac_6": float(np.mean(vals > 6)),
            "tail_frac_8": float(np.mean(vals > 8)),
            "mean_abs_diff_vs_largest": diff,
        })
    _write_csv(args.out, BP_LIMIT_COLUMNS, rows)
    return 0


def _float_list(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cmcompete",
                                description="Two-color competition on heavy-tailed "
                                            "configuration-model graphs")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("theory", help="closed-form prediction for one input")
    t.add_argument("--n", type=float, required=True)
    t.add_argument("--tau", type=float, required=True)
    t.add_argument("--yr", type=float, required=True)
    t.add_argument("--yb", type=float, required=True)
    t.add_argument("--rho", type=float, default=None)
    fmt = t.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="JSON output (default)")
    fmt.add_argument("--csv", action="store_true", help="CSV instead of JSON")
    t.add_argument("--out", default=None)
    t.set_defaults(func=cmd_theory)

    c = sub.add_parser("compete", help="competition runs on sampled graphs")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--tau", type=float, required=True)
    c.add_argument("--rho", type=float, default=0.05)
    c.add_argument("--trials", type=int, required=True)
    c.add_argument("--seed", type=int, required=True)
    c.add_argument("--tie-blue-prob", type=float, default=0.5, dest="tie_blue_prob")
    c.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    c.add_argument("--out", default=None)
    c.set_defaults(func=cmd_compete)

    d = sub.add_parser("distances", help="measured vs predicted distances over an n-grid")
    d.add_argument("--n-grid", type=_int_list, required=True, dest="n_grid",
                   help="comma-separated ascending list of n values")
    d.add_argument("--tau", type=float, required=True)
    d.add_argument("--rho", type=float, default=0.05)
    d.add_argument("--trials", type=int, required=True, help="source pairs per n")
    d.add_argument("--seed", type=int, required=True)
    d.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    d.add_argument("--out", default=None)
    d.set_defaults(func=cmd_distances)

    k = sub.add_parser("coloring", help="tree coloring scheme over a (Q, gamma) grid")
    k.add_argument("--tau", type=float, required=True)
    k.add_argument("--rule", type=int, default=1, choices=(1, 2))
    k.add_argument("--q-grid", type=_float_list, required=True, dest="q_grid")
    k.add_argument("--gamma-grid", type=_float_list, required=True, dest="gamma_grid")
    k.add_argument("--trials", type=int, required=True)
    k.add_argument("--seed", type=int, required=True)
    k.add_argument("--out", default=None)
    k.set_defaults(func=cmd_coloring)

    b = sub.add_parser("bp-limit", help="growth-rate estimates at nested thresholds")
    b.add_argument("--tau", type=float, required=True)
    b.add_argument("--trials", type=int, required=True)
    b.add_argument("--seed", type=int, required=True)
    b.add_argument("--thresholds", type=_float_list, default=[1e3, 1e6])
    b.add_argument("--root-law", default="degree", choices=("degree", "size_biased"),
                   dest="root_law")
    b.add_argument("--out", default=None)
    b.set_defaults(func=cmd_bp_limit)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
