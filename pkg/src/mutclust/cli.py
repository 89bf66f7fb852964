"""Batch command-line front end.

Subcommands: cluster (full pipeline on real data), synth (planted or
random instances with recovery/ratio tables), oracle-check (LP and
pipeline versus the exact solver), driver-distance (network distance
histograms for drivers versus random pairs), and eval (re-score an
existing clustering).  Every run writes a manifest sufficient to
reproduce its outputs.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .errors import ConvergenceError, InputError
from .evaluate import (
    bfs_hops,
    evaluate_clustering,
    pairwise_distances,
    report_to_json,
    report_to_tsv,
)
from .ingest import (
    GeneCatalog,
    InteractionNetwork,
    MutationMatrix,
    filter_top_genes,
    load_alteration,
    load_cnv,
    load_drivers,
    load_expression,
    load_network,
    merge_cnv,
    zscore,
)
from .lp import solve_lp, write_solution_tsv
from .oracle import solve_exact
from .rounding import (
    RoundingParams,
    Clustering,
    clustering_cost,
    round_solution,
    write_clustering_json,
    write_clustering_text,
)
from .synth import compare_clusterings, make_planted, make_random
from .triangles import BACKEND
from .weights import SCHEMES, WeightConfig, build_weights, write_weights_tsv

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERICAL = 3


# ---------------------------------------------------------------------------
# configuration plumbing


@dataclass(frozen=True)
class RunConfig:
    """Resolved parameters of a cluster run (flags over config file)."""

    alteration: str
    cnv: Optional[str]
    expression: Optional[str]
    network: Optional[str]
    drivers: Optional[str]
    l_cnv: int
    h_cnv: int
    top_percentile: float
    scheme: str
    a: float
    j_coverage: float
    j_network: float
    j_expression: float
    w1: Optional[float]
    w2: Optional[float]
    w3: Optional[float]
    k: int
    alpha: float
    tol: float
    batch: Optional[int]
    pivot_rule: str
    baseline_trials: int
    seed: int
    out: str


def _read_config_file(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if "=" not in stripped:
                raise InputError(f"{path}:{lineno}: expected key=value")
            key, _, value = stripped.partition("=")
            values[key.strip()] = value.strip()
    return values


def _apply_config_file(parser: argparse.ArgumentParser, argv: list[str]) -> None:
    """Install --config key=value pairs as parser defaults so that
    command-line flags still win."""
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    values = _read_config_file(known.config)
    settable = {
        a.dest: a
        for a in parser._actions
        if a.option_strings and a.nargs != 0 and a.dest not in ("config", "help")
    }
    unknown = set(values) - set(settable)
    if unknown:
        raise InputError(f"{known.config}: unknown config keys {sorted(unknown)}")
    typed = {}
    for key, raw in values.items():
        action = settable[key]
        try:
            typed[key] = action.type(raw) if action.type else raw
        except ValueError as exc:
            raise InputError(f"{known.config}: bad value for {key}: {exc}") from exc
    parser.set_defaults(**typed)


def _require_file(path: Optional[str], flag: str) -> None:
    if path is not None and not os.path.isfile(path):
        raise InputError(f"{flag}: file not found: {path}")


def _write_manifest(out: str, command: str, params: dict) -> None:
    doc = {
        "command": command,
        "params": params,
        "version": __version__,
        "triangle_backend": BACKEND,
    }
    with open(os.path.join(out, "manifest.json"), "w", encoding="utf-8") as fh:
        fh.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")


def _parse_sizes(text: str) -> list[int]:
    try:
        sizes = [int(s) for s in text.split(",") if s]
    except ValueError as exc:
        raise InputError(f"--sizes: {exc}") from exc
    if not sizes:
        raise InputError("--sizes: empty list")
    return sizes


def _parse_levels(text: str) -> list[tuple[float, float]]:
    levels = []
    for part in text.split(","):
        if not part:
            continue
        if ":" not in part:
            raise InputError(f"--levels: expected prob:value, got {part!r}")
        p_text, _, v_text = part.partition(":")
        try:
            levels.append((float(p_text), float(v_text)))
        except ValueError as exc:
            raise InputError(f"--levels: {exc}") from exc
    if not levels:
        raise InputError("--levels: empty list")
    return levels


_DEFAULT_LEVELS = [(1.0 / 9.0, round(0.1 * i, 1)) for i in range(1, 10)]


# ---------------------------------------------------------------------------
# cluster


def _add_cluster_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="key=value file; flags override it")
    sub.add_argument("--alteration", help="binary alteration TSV")
    sub.add_argument("--cnv", help="integer CNV TSV (optional)")
    sub.add_argument("--expression", help="expression TSV (optional)")
    sub.add_argument("--network", help="edge-list file (optional)")
    sub.add_argument("--drivers", help="driver gene list (optional)")
    sub.add_argument("--l-cnv", dest="l_cnv", type=int, default=-1)
    sub.add_argument("--h-cnv", dest="h_cnv", type=int, default=3)
    sub.add_argument(
        "--top-percentile", dest="top_percentile", type=float, default=95.0
    )
    sub.add_argument("--scheme", choices=SCHEMES, default="ME-CO")
    sub.add_argument("--a", type=float, default=1.0, help="exclusivity scale")
    sub.add_argument("--J", dest="j_coverage", type=float, default=95.0)
    sub.add_argument("--Jn", dest="j_network", type=float, default=95.0)
    sub.add_argument("--Jx", dest="j_expression", type=float, default=95.0)
    sub.add_argument("--w1", type=float, default=None)
    sub.add_argument("--w2", type=float, default=None)
    sub.add_argument("--w3", type=float, default=None)
    sub.add_argument("--K", dest="k", type=int, default=6, help="block size cap - 1")
    sub.add_argument("--alpha", type=float, default=2.0 / 7.0)
    sub.add_argument("--tol", type=float, default=1e-6)
    sub.add_argument("--batch", type=int, default=None)
    sub.add_argument("--pivot-rule", dest="pivot_rule", default="lowest-index")
    sub.add_argument(
        "--baseline-trials", dest="baseline_trials", type=int, default=0
    )
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--out", default="mutclust-out")
    sub.add_argument("--dump-weights", action="store_true")
    sub.add_argument("--dump-lp", action="store_true")
    sub.add_argument("--dry-run", action="store_true")


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    if not args.alteration:
        raise InputError("--alteration is required")
    cfg = RunConfig(
        alteration=args.alteration,
        cnv=args.cnv,
        expression=args.expression,
        network=args.network,
        drivers=args.drivers,
        l_cnv=args.l_cnv,
        h_cnv=args.h_cnv,
        top_percentile=args.top_percentile,
        scheme=args.scheme,
        a=args.a,
        j_coverage=args.j_coverage,
        j_network=args.j_network,
        j_expression=args.j_expression,
        w1=args.w1,
        w2=args.w2,
        w3=args.w3,
        k=args.k,
        alpha=args.alpha,
        tol=args.tol,
        batch=args.batch,
        pivot_rule=args.pivot_rule,
        baseline_trials=args.baseline_trials,
        seed=args.seed,
        out=args.out,
    )
    weight_cfg = WeightConfig(
        scheme=cfg.scheme,
        a=cfg.a,
        j_coverage=cfg.j_coverage,
        j_network=cfg.j_network,
        j_expression=cfg.j_expression,
        w1=cfg.w1,
        w2=cfg.w2,
        w3=cfg.w3,
    )
    if "network" in weight_cfg.components and not cfg.network:
        raise InputError(f"--network is required for scheme {cfg.scheme}")
    if "expression" in weight_cfg.components and not cfg.expression:
        raise InputError(f"--expression is required for scheme {cfg.scheme}")
    _require_file(cfg.alteration, "--alteration")
    _require_file(cfg.cnv, "--cnv")
    _require_file(cfg.expression, "--expression")
    _require_file(cfg.network, "--network")
    _require_file(cfg.drivers, "--drivers")
    return cfg


def _resolved_params(cfg: RunConfig, weight_cfg: WeightConfig) -> dict:
    params = {
        "alteration": cfg.alteration,
        "cnv": cfg.cnv,
        "expression": cfg.expression,
        "network": cfg.network,
        "drivers": cfg.drivers,
        "l_cnv": cfg.l_cnv,
        "h_cnv": cfg.h_cnv,
        "top_percentile": cfg.top_percentile,
        "scheme": weight_cfg.scheme,
        "a": weight_cfg.a,
        "j_coverage": weight_cfg.j_coverage,
        "j_network": weight_cfg.j_network,
        "j_expression": weight_cfg.j_expression,
        "w1": weight_cfg.w1,
        "w2": weight_cfg.w2,
        "w3": weight_cfg.w3,
        "K": cfg.k,
        "alpha": cfg.alpha,
        "tol": cfg.tol,
        "batch": cfg.batch,
        "pivot_rule": cfg.pivot_rule,
        "baseline_trials": cfg.baseline_trials,
        "seed": cfg.seed,
    }
    return params


def cmd_cluster(args: argparse.Namespace) -> int:
    cfg = _config_from_args(args)
    weight_cfg = WeightConfig(
        scheme=cfg.scheme,
        a=cfg.a,
        j_coverage=cfg.j_coverage,
        j_network=cfg.j_network,
        j_expression=cfg.j_expression,
        w1=cfg.w1,
        w2=cfg.w2,
        w3=cfg.w3,
    )
    params = _resolved_params(cfg, weight_cfg)
    if args.dry_run:
        print(json.dumps(params, sort_keys=True, indent=2))
        return EXIT_OK

    os.makedirs(cfg.out, exist_ok=True)
    _write_manifest(cfg.out, "cluster", params)

    alteration = load_alteration(cfg.alteration)
    if cfg.cnv:
        cnv = load_cnv(cfg.cnv)
        mutation = merge_cnv(alteration, cnv, cfg.l_cnv, cfg.h_cnv)
    else:
        mutation = MutationMatrix(
            alteration.genes, alteration.samples, alteration.entries
        )
    catalog, mutation = filter_top_genes(mutation, cfg.top_percentile)
    log.info("retained %d of %d genes", len(catalog), len(alteration.genes))

    net = load_network(cfg.network) if cfg.network else None
    expr = None
    if cfg.expression:
        expr = zscore(load_expression(cfg.expression)).reindex(catalog)
    drivers = load_drivers(cfg.drivers) if cfg.drivers else None

    weights = build_weights(mutation, weight_cfg, net=net, z=expr)
    if args.dump_weights:
        write_weights_tsv(os.path.join(cfg.out, "weights.tsv"), weights)

    sol = solve_lp(weights, tol=cfg.tol, batch=cfg.batch)
    if args.dump_lp:
        write_solution_tsv(os.path.join(cfg.out, "lp_solution.tsv"), sol, weights)
    with open(os.path.join(cfg.out, "lp_summary.json"), "w", encoding="utf-8") as fh:
        fh.write(sol.summary_json() + "\n")

    rounding = RoundingParams(
        k=cfg.k, alpha=cfg.alpha, pivot_rule=cfg.pivot_rule, seed=cfg.seed
    )
    clusters = round_solution(sol, weights, rounding)
    cost = clustering_cost(clusters, weights)
    write_clustering_json(
        os.path.join(cfg.out, "clustering.json"), clusters, catalog, params, cost
    )
    write_clustering_text(
        os.path.join(cfg.out, "clustering.txt"), clusters, catalog
    )

    report = evaluate_clustering(
        clusters,
        catalog,
        mutation,
        net=net,
        drivers=drivers,
        baseline_trials=cfg.baseline_trials,
        seed=cfg.seed,
    )
    with open(os.path.join(cfg.out, "report.json"), "w", encoding="utf-8") as fh:
        fh.write(report_to_json(report))
    with open(os.path.join(cfg.out, "report.tsv"), "w", encoding="utf-8") as fh:
        fh.write(report_to_tsv(report))

    print(f"genes clustered: {clusters.n}")
    print(f"lp objective:    {sol.objective:.6f}")
    print(f"rounded cost:    {cost:.6f}")
    print(f"clusters:        {len(clusters.blocks)} (max size {clusters.max_block_size})")
    print(f"outputs in:      {cfg.out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# synth


def _pipeline_on_weights(weights, k: int, alpha: float, tol: float):
    sol = solve_lp(weights, tol=tol)
    params = RoundingParams(k=k, alpha=alpha)
    clusters = round_solution(sol, weights, params)
    return sol, clusters, clustering_cost(clusters, weights)


def cmd_synth(args: argparse.Namespace) -> int:
    os.makedirs(args.out, exist_ok=True)
    rows = []
    if args.mode == "planted":
        sizes = _parse_sizes(args.sizes)
        n = sum(sizes)
        header = (
            "seed\tgamma\tflips\texact_match\toverlap\tlp_objective\tcost"
            + ("\texact_cost\tratio" if n <= args.max_oracle_n else "")
        )
        exact_hits = 0
        for i in range(args.instances):
            seed = args.seed + i
            inst = make_planted(sizes, args.gamma, args.flips, seed)
            sol, clusters, cost = _pipeline_on_weights(
                inst.weights, args.k, args.alpha, args.tol
            )
            match, overlap = compare_clusterings(inst.truth, clusters)
            exact_hits += match
            row = (
                f"{seed}\t{args.gamma}\t{args.flips}\t{match}\t{overlap:.4f}"
                f"\t{sol.objective:.6f}\t{cost:.6f}"
            )
            if n <= args.max_oracle_n:
                exact = solve_exact(inst.weights, args.k, max_n=args.max_oracle_n)
                row += f"\t{exact.cost:.6f}\t{cost / exact.cost:.4f}"
            rows.append(row)
        print(
            f"planted sizes={sizes} gamma={args.gamma} flips={args.flips}: "
            f"{exact_hits}/{args.instances} exact recoveries"
        )
    else:
        levels = _parse_levels(args.levels) if args.levels else _DEFAULT_LEVELS
        header = "seed\tn\tlp_objective\tcost" + (
            "\texact_cost\tratio" if args.n <= args.max_oracle_n else ""
        )
        for i in range(args.instances):
            seed = args.seed + i
            weights = make_random(args.n, levels, seed)
            sol, clusters, cost = _pipeline_on_weights(
                weights, args.k, args.alpha, args.tol
            )
            row = f"{seed}\t{args.n}\t{sol.objective:.6f}\t{cost:.6f}"
            if args.n <= args.max_oracle_n:
                exact = solve_exact(weights, args.k, max_n=args.max_oracle_n)
                ratio = cost / exact.cost if exact.cost > 0 else float("inf")
                row += f"\t{exact.cost:.6f}\t{ratio:.4f}"
            rows.append(row)
        print(f"random n={args.n}: {args.instances} instances")

    table_path = os.path.join(args.out, "synth_results.tsv")
    with open(table_path, "w", encoding="utf-8") as fh:
        fh.write(header + "\n")
        fh.write("\n".join(rows) + "\n")
    _write_manifest(
        args.out,
        "synth",
        {
            "mode": args.mode,
            "sizes": args.sizes,
            "gamma": args.gamma,
            "flips": args.flips,
            "n": args.n,
            "levels": args.levels,
            "instances": args.instances,
            "K": args.k,
            "alpha": args.alpha,
            "tol": args.tol,
            "seed": args.seed,
        },
    )
    print(f"table: {table_path}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# oracle-check


def cmd_oracle_check(args: argparse.Namespace) -> int:
    if args.n > args.max_oracle_n:
        raise InputError(
            f"--n {args.n} exceeds the oracle limit {args.max_oracle_n}"
        )
    os.makedirs(args.out, exist_ok=True)
    levels = _parse_levels(args.levels) if args.levels else _DEFAULT_LEVELS
    rows = []
    violations = 0
    worst_ratio = 0.0
    for i in range(args.instances):
        seed = args.seed + i
        weights = make_random(args.n, levels, seed)
        sol, clusters, cost = _pipeline_on_weights(
            weights, args.k, args.alpha, args.tol
        )
        exact = solve_exact(weights, args.k, max_n=args.max_oracle_n)
        lp_ok = sol.objective <= exact.cost + 1e-6
        ratio = cost / exact.cost if exact.cost > 0 else float("inf")
        violations += not lp_ok
        worst_ratio = max(worst_ratio, ratio)
        rows.append(
            f"{seed}\t{sol.objective:.6f}\t{exact.cost:.6f}\t{cost:.6f}"
            f"\t{lp_ok}\t{ratio:.4f}"
        )
    table_path = os.path.join(args.out, "oracle_check.tsv")
    with open(table_path, "w", encoding="utf-8") as fh:
        fh.write("seed\tlp_objective\texact_cost\tpipeline_cost\tlp_lower_bound\tratio\n")
        fh.write("\n".join(rows) + "\n")
    _write_manifest(
        args.out,
        "oracle-check",
        {
            "n": args.n,
            "K": args.k,
            "instances": args.instances,
            "levels": args.levels,
            "alpha": args.alpha,
            "tol": args.tol,
            "seed": args.seed,
        },
    )
    print(
        f"{args.instances} instances: lower-bound violations={violations}, "
        f"worst ratio={worst_ratio:.4f}"
    )
    print(f"table: {table_path}")
    return EXIT_NUMERICAL if violations else EXIT_OK


# ---------------------------------------------------------------------------
# driver-distance


def _sample_pair_distances(
    net: InteractionNetwork, pairs: int, rng: np.random.Generator
) -> tuple[list[int], int]:
    genes = net.genes
    if len(genes) < 2:
        raise InputError("network has fewer than two genes")
    distances: list[int] = []
    excluded = 0
    if pairs == 0:
        summary_genes = genes
        hops = {g: bfs_hops(net, g) for g in summary_genes}
        for i, u in enumerate(summary_genes):
            for v in summary_genes[i + 1 :]:
                d = hops[u].get(v)
                if d is None:
                    excluded += 1
                else:
                    distances.append(d)
        return distances, excluded
    for _ in range(pairs):
        u, v = rng.choice(len(genes), size=2, replace=False)
        d = bfs_hops(net, genes[int(u)]).get(genes[int(v)])
        if d is None:
            excluded += 1
        else:
            distances.append(d)
    return distances, excluded


def cmd_driver_distance(args: argparse.Namespace) -> int:
    _require_file(args.network, "--network")
    _require_file(args.drivers, "--drivers")
    os.makedirs(args.out, exist_ok=True)
    net = load_network(args.network)
    drivers = [g for g in load_drivers(args.drivers) if g in net]
    if len(drivers) < 2:
        raise InputError("fewer than two driver genes appear in the network")
    rng = np.random.default_rng(args.seed)

    random_dists, random_excluded = _sample_pair_distances(net, args.pairs, rng)
    driver_summary = pairwise_distances(drivers, net)
    driver_dists: list[int] = []
    hops = {g: bfs_hops(net, g) for g in drivers}
    ordered = sorted(set(drivers))
    for i, u in enumerate(ordered):
        for v in ordered[i + 1 :]:
            d = hops[u].get(v)
            if d is not None:
                driver_dists.append(d)

    observed = driver_summary.mean
    p_value: Optional[float] = None
    if observed is not None:
        hits = 0
        for _ in range(args.trials):
            sample = rng.choice(len(net.genes), size=len(ordered), replace=False)
            names = [net.genes[int(i)] for i in sample]
            mean = pairwise_distances(names, net).mean
            if mean is not None and mean <= observed:
                hits += 1
        p_value = (hits + 1) / (args.trials + 1)

    max_hop = max(random_dists + driver_dists, default=0)
    hist_path = os.path.join(args.out, "distance_histogram.tsv")
    with open(hist_path, "w", encoding="utf-8") as fh:
        fh.write("hops\trandom_pairs\tdriver_pairs\n")
        for h in range(1, max_hop + 1):
            fh.write(
                f"{h}\t{sum(d == h for d in random_dists)}"
                f"\t{sum(d == h for d in driver_dists)}\n"
            )
    summary = {
        "random_mean": float(np.mean(random_dists)) if random_dists else None,
        "driver_mean": observed,
        "p_value": p_value,
        "random_pairs_used": len(random_dists),
        "random_pairs_excluded": random_excluded,
        "driver_pairs_used": driver_summary.pairs_used,
        "driver_pairs_excluded": driver_summary.pairs_excluded,
        "drivers_in_network": len(ordered),
        "pairs_requested": args.pairs,
        "trials": args.trials,
        "seed": args.seed,
    }
    with open(os.path.join(args.out, "summary.json"), "w", encoding="utf-8") as fh:
        fh.write(json.dumps(summary, sort_keys=True, indent=2) + "\n")
    _write_manifest(
        args.out,
        "driver-distance",
        {
            "network": args.network,
            "drivers": args.drivers,
            "pairs": args.pairs,
            "trials": args.trials,
            "seed": args.seed,
        },
    )
    p_text = "n/a" if p_value is None else f"{p_value:.4f}"
    print(
        f"driver mean distance {summary['driver_mean']}, "
        f"random mean {summary['random_mean']}, p={p_text}"
    )
    return EXIT_OK


# ---------------------------------------------------------------------------
# eval


def cmd_eval(args: argparse.Namespace) -> int:
    _require_file(args.clustering, "--clustering")
    _require_file(args.alteration, "--alteration")
    _require_file(args.cnv, "--cnv")
    _require_file(args.network, "--network")
    _require_file(args.drivers, "--drivers")
    os.makedirs(args.out, exist_ok=True)

    with open(args.clustering, encoding="utf-8") as fh:
        doc = json.load(fh)
    if "blocks" not in doc:
        raise InputError(f"{args.clustering}: missing 'blocks' field")

    alteration = load_alteration(args.alteration)
    if args.cnv:
        cnv = load_cnv(args.cnv)
        mutation = merge_cnv(alteration, cnv, args.l_cnv, args.h_cnv)
    else:
        mutation = MutationMatrix(
            alteration.genes, alteration.samples, alteration.entries
        )

    order: list[str] = []
    for block in doc["blocks"]:
        for name in block:
            if name not in mutation.genes.index:
                raise InputError(
                    f"{args.clustering}: gene {name!r} not in the mutation data"
                )
            order.append(name)
    if len(set(order)) != len(order):
        raise InputError(f"{args.clustering}: a gene appears in two blocks")
    catalog = GeneCatalog(tuple(order))
    keep = [mutation.genes.index[name] for name in order]
    restricted = MutationMatrix(catalog, mutation.samples, mutation.entries[keep])

    blocks = []
    cursor = 0
    for block in doc["blocks"]:
        blocks.append(tuple(range(cursor, cursor + len(block))))
        cursor += len(block)
    clusters = Clustering(blocks=tuple(blocks), n=len(order))

    net = load_network(args.network) if args.network else None
    drivers = load_drivers(args.drivers) if args.drivers else None
    report = evaluate_clustering(
        clusters,
        catalog,
        restricted,
        net=net,
        drivers=drivers,
        baseline_trials=args.baseline_trials,
        seed=args.seed,
    )
    with open(os.path.join(args.out, "report.json"), "w", encoding="utf-8") as fh:
        fh.write(report_to_json(report))
    with open(os.path.join(args.out, "report.tsv"), "w", encoding="utf-8") as fh:
        fh.write(report_to_tsv(report))
    _write_manifest(
        args.out,
        "eval",
        {
            "clustering": args.clustering,
            "alteration": args.alteration,
            "cnv": args.cnv,
            "network": args.network,
            "drivers": args.drivers,
            "baseline_trials": args.baseline_trials,
            "seed": args.seed,
        },
    )
    print(f"re-scored {len(blocks)} clusters over {len(order)} genes")
    print(f"outputs in: {args.out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mutclust",
        description="Size-bounded correlation clustering of mutation profiles",
    )
    parser.add_argument("--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    cluster = sub.add_parser("cluster", help="run the full pipeline on data files")
    _add_cluster_flags(cluster)
    cluster.set_defaults(func=cmd_cluster)
    parser.cluster_parser = cluster  # config-file defaults hook

    synth = sub.add_parser("synth", help="planted/random synthetic experiments")
    synth.add_argument("--mode", choices=("planted", "random"), default="planted")
    synth.add_argument("--sizes", default="6,6,6,6,6,5")
    synth.add_argument("--gamma", type=float, default=0.9)
    synth.add_argument("--flips", type=int, default=0)
    synth.add_argument("--n", type=int, default=8)
    synth.add_argument("--levels", default=None, help="prob:value,...")
    synth.add_argument("--instances", type=int, default=20)
    synth.add_argument("--K", dest="k", type=int, default=6)
    synth.add_argument("--alpha", type=float, default=2.0 / 7.0)
    synth.add_argument("--tol", type=float, default=1e-6)
    synth.add_argument("--max-oracle-n", dest="max_oracle_n", type=int, default=12)
    synth.add_argument("--seed", type=int, default=0)
    synth.add_argument("--out", default="mutclust-synth")
    synth.set_defaults(func=cmd_synth)

    oracle = sub.add_parser(
        "oracle-check", help="LP bound and pipeline ratio versus exact solver"
    )
    oracle.add_argument("--n", type=int, default=8)
    oracle.add_argument("--K", dest="k", type=int, default=3)
    oracle.add_argument("--instances", type=int, default=20)
    oracle.add_argument("--levels", default=None, help="prob:value,...")
    oracle.add_argument("--alpha", type=float, default=2.0 / 7.0)
    oracle.add_argument("--tol", type=float, default=1e-6)
    oracle.add_argument("--max-oracle-n", dest="max_oracle_n", type=int, default=12)
    oracle.add_argument("--seed", type=int, default=0)
    oracle.add_argument("--out", default="mutclust-oracle")
    oracle.set_defaults(func=cmd_oracle_check)

    dd = sub.add_parser(
        "driver-distance", help="network distances: drivers vs random pairs"
    )
    dd.add_argument("--network", required=True)
    dd.add_argument("--drivers", required=True)
    dd.add_argument("--pairs", type=int, default=1000, help="0 = all pairs")
    dd.add_argument("--trials", type=int, default=199)
    dd.add_argument("--seed", type=int, default=0)
    dd.add_argument("--out", default="mutclust-distance")
    dd.set_defaults(func=cmd_driver_distance)

    ev = sub.add_parser("eval", help="re-score an existing clustering JSON")
    ev.add_argument("--clustering", required=True)
    ev.add_argument("--alteration", required=True)
    ev.add_argument("--cnv", default=None)
    ev.add_argument("--l-cnv", dest="l_cnv", type=int, default=-1)
    ev.add_argument("--h-cnv", dest="h_cnv", type=int, default=3)
    ev.add_argument("--network", default=None)
    ev.add_argument("--drivers", default=None)
    ev.add_argument("--baseline-trials", dest="baseline_trials", type=int, default=0)
    ev.add_argument("--seed", type=int, default=0)
    ev.add_argument("--out", default="mutclust-eval")
    ev.set_defaults(func=cmd_eval)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        if argv[:1] == ["cluster"]:
            _apply_config_file(parser.cluster_parser, argv)
        args = parser.parse_args(argv)
        logging.basicConfig(
            level=logging.DEBUG if args.verbose else logging.INFO,
            format="%(levelname)s %(name)s: %(message)s",
            stream=sys.stderr,
        )
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ConvergenceError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
