"""Command-line surface: generate, oracle, calibrate, analyze, growth.

Exit codes: 0 success, 1 domain/feasibility/numeric failure, 2 usage error.
Every generate run writes a manifest listing the exact threshold used and a
content digest of each artifact, so reruns can be verified bit for bit.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, analytics, growth as growthmod, io as tio, statfit
from .errors import ThreshnetError, UnsupportedAnalyticsError
from .generator import degree_sequence, generate
from .model import EdgeRule, LinkFn, ModelConfig, ParetoParams, Variant


def _add_pareto_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--a", type=float, required=True, help="Pareto shape")
    p.add_argument("--w0", type=float, default=1.0, help="Pareto scale (default 1)")


def _add_variant_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--variant", choices=[v.value for v in Variant], default="undirected")
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--h", type=str, default=None, help="identity|exp|oddpow:m:c|evenpow:m")


def _build_rule(args, theta: float) -> EdgeRule:
    variant = Variant(args.variant)
    if variant is Variant.UNDIRECTED:
        return EdgeRule.undirected(theta)
    if variant is Variant.DIRECTED:
        return EdgeRule.directed(theta, args.alpha, args.beta)
    return EdgeRule.link_function(theta, args.alpha, args.beta, LinkFn.parse(args.h or "identity"))


def _resolve_theta(args, pareto: ParetoParams) -> float:
    sources = [args.theta is not None, args.target_edges is not None, args.schedule is not None]
    if sum(sources) != 1:
        raise ThreshnetError("specify exactly one of --theta, --target-edges, --schedule")
    if args.theta is not None:
        return args.theta
    if args.target_edges is not None:
        if args.variant == "directed":
            return analytics.calibrate_theta_directed(args.n, pareto, args.target_edges, args.alpha, args.beta)
        if args.variant == "linkfn":
            raise UnsupportedAnalyticsError("no calibration closed form for link-function rules")
        return analytics.calibrate_theta(args.n, pareto, args.target_edges)
    if args.schedule != "powerlaw":
        raise ThreshnetError(f"unknown schedule {args.schedule!r}")
    if args.D is None:
        raise ThreshnetError("--schedule powerlaw requires --D")
    return analytics.theta_powerlaw_schedule(args.n, args.D, pareto.a)


def _config_payload(config: ModelConfig) -> dict:
    rule = config.rule
    payload = {
        "n": config.n,
        "d": config.d,
        "a": config.pareto.a,
        "w0": config.pareto.w0,
        "variant": rule.variant.value,
        "theta": rule.theta,
        "seed": config.seed,
    }
    if rule.is_directed:
        payload["alpha"] = rule.alpha
        payload["beta"] = rule.beta
    if rule.variant is Variant.LINKFN:
        payload["h"] = rule.h.spec()
    return payload


def cmd_generate(args) -> int:
    pareto = ParetoParams(a=args.a, w0=args.w0)
    theta = _resolve_theta(args, pareto)
    rule = _build_rule(args, theta)
    config = ModelConfig(n=args.n, d=args.d, pareto=pareto, rule=rule, seed=args.seed)
    t0 = time.perf_counter()
    graph = generate(config, workers=args.workers, max_edges=args.max_edges)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    nodes_path = out / "nodes.tsv"
    edges_path = out / "edges.tsv"
    tio.write_nodes_tsv(nodes_path, graph.weights, graph.directions)
    tio.write_edges_tsv(edges_path, graph.edges)
    manifest = {
        "tool": "threshnet",
        "version": __version__,
        "command": "generate",
        "config": _config_payload(config),
        "seed": config.seed,
        "n_edges": graph.n_edges,
        "n_candidates": graph.n_candidates,
        "outputs": {
            "nodes.tsv": tio.sha256_file(nodes_path),
            "edges.tsv": tio.sha256_file(edges_path),
        },
        "timing_sec": time.perf_counter() - t0,
    }
    tio.write_json(out / "manifest.json", manifest)
    print(f"n={graph.n} edges={graph.n_edges} theta={theta:.17g} out={out}")
    return 0


_ORACLE_KINDS = ("pe", "pew", "pwedge", "var", "em", "em-linlog", "pew-directed", "pew-linkfn")


def cmd_oracle(args) -> int:
    pareto = ParetoParams(a=args.a, w0=args.w0)
    kind = args.kind
    if kind == "pe":
        value = analytics.p_edge(pareto, args.theta)
    elif kind == "pew":
        value = analytics.p_edge_given_weight(args.w, pareto, args.theta)
    elif kind == "pwedge":
        value = analytics.p_wedge(pareto, args.theta)
    elif kind == "var":
        value = analytics.variance_edges(args.n, pareto, args.theta)
    elif kind == "em":
        value = analytics.expected_edges(args.n, pareto, args.theta)
    elif kind == "em-linlog":
        if args.D is None:
            raise ThreshnetError("em-linlog requires --D")
        value = analytics.expected_edges_linlog(args.n, args.D, pareto)
    elif kind == "pew-directed":
        value = analytics.p_edge_given_weight_directed(args.w, pareto, args.theta, args.alpha, args.beta)
    elif kind == "pew-linkfn":
        value = analytics.p_edge_given_weight_linkfn(
            args.w, pareto, args.theta, args.alpha, args.beta, LinkFn.parse(args.h or "identity")
        )
    else:  # pragma: no cover - argparse restricts choices
        raise ThreshnetError(f"unknown oracle {kind!r}")
    print(format(value, ".17g"))
    print(json.dumps({"kind": kind, "value": value}, sort_keys=True))
    return 0


def cmd_calibrate(args) -> int:
    pareto = ParetoParams(a=args.a, w0=args.w0)
    if args.variant == "directed":
        theta = analytics.calibrate_theta_directed(args.n, pareto, args.target_edges, args.alpha, args.beta)
        achieved = analytics.expected_arcs_directed(args.n, pareto, theta, args.alpha, args.beta)
    else:
        theta = analytics.calibrate_theta(args.n, pareto, args.target_edges)
        achieved = analytics.expected_edges(args.n, pareto, theta)
    payload = {
        "theta": theta,
        "expected_edges": achieved,
        "target_edges": args.target_edges,
        "n": args.n,
        "a": args.a,
        "w0": args.w0,
        "variant": args.variant,
    }
    print(format(theta, ".17g"))
    print(json.dumps(payload, sort_keys=True))
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        tio.write_json(out / "calibration.json", payload)
    return 0


def _fit_payload(fit: statfit.FitResult, gof: statfit.GofResult | None) -> dict:
    payload = {
        "alpha_hat": fit.alpha_hat,
        "x_min": fit.x_min,
        "ks_stat": fit.ks_stat,
        "n_tail": fit.n_tail,
        "alpha_continuous_approx": fit.alpha_continuous,
        "n_zero_degree": fit.n_zero,
    }
    if gof is not None:
        payload["p_value"] = gof.p_value
        payload["p_stderr"] = gof.stderr
        payload["n_bootstrap"] = gof.n_bootstrap
    return payload


def _analyze_one(degrees: np.ndarray, label: str, args, out: Path) -> dict:
    fit = statfit.fit_powerlaw_discrete(degrees, x_min=args.x_min)
    gof = None
    if args.bootstrap:
        gof = statfit.gof_pvalue(degrees, fit, n_bootstrap=args.bootstrap, seed=args.seed)
    payload = _fit_payload(fit, gof)
    values, fractions = statfit.ccdf(degrees)
    suffix = f"_{label}" if label else ""
    tio.write_json(out / f"fit{suffix}.json", payload)
    tio.write_ccdf_csv(out / f"ccdf{suffix}.csv", values, fractions)
    pstr = f" p={gof.p_value:.4f}" if gof else ""
    print(f"{label or 'degrees'}: alpha={fit.alpha_hat:.4f} x_min={fit.x_min} ks={fit.ks_stat:.5f}{pstr}")
    return payload


def cmd_analyze(args) -> int:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if args.degrees:
        degrees = tio.read_degree_file(args.degrees)
        _analyze_one(degrees, "", args, out)
        return 0
    edges = tio.read_edges_tsv(args.edges)
    n = args.n if args.n else int(edges.max()) + 1
    if args.directed:
        out_deg = np.bincount(edges[:, 0], minlength=n)
        in_deg = np.bincount(edges[:, 1], minlength=n)
        _analyze_one(out_deg, "out", args, out)
        _analyze_one(in_deg, "in", args, out)
    else:
        deg = np.bincount(edges.ravel(), minlength=n)
        _analyze_one(deg, "", args, out)
    return 0


def cmd_growth_sweep(args) -> int:
    pareto = ParetoParams(a=args.a, w0=args.w0)
    if args.schedule == "powerlaw":
        if args.D is None:
            raise ThreshnetError("--schedule powerlaw requires --D")
        schedule = analytics.PowerLawSchedule(D=args.D)
    elif args.schedule == "linear":
        coeff = args.coeff if args.coeff is not None else 1.0
        schedule = analytics.CalibratedSchedule(target=lambda n: coeff * n)
    else:
        raise ThreshnetError(f"unknown schedule {args.schedule!r}")
    ns = [int(x) for x in args.ns.split(",")]
    seeds = list(range(args.seeds))
    sweep = growthmod.run_growth_sweep(schedule, ns, pareto, seeds, workers=args.workers)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for seed, series in sweep.items():
        growthmod.write_series_csv(out / f"series_seed{seed}.csv", series)
    for n_idx, n in enumerate(ns):
        pt = sweep[seeds[0]].points[n_idx]
        mean_m = float(np.mean([sweep[s].points[n_idx].m for s in seeds]))
        print(f"n={n} theta={pt.theta:.6g} em={pt.em:.6g} mean_m={mean_m:.6g}")
    if args.fit:
        mean_points = [
            (n, float(np.mean([sweep[s].points[i].m for s in seeds]))) for i, n in enumerate(ns)
        ]
        fit = growthmod.fit_growth_curve(mean_points)
        payload = {"c1": fit.c1, "c2": fit.c2, "residual_rms": fit.residual, "log": "natural"}
        tio.write_json(out / "growth_fit.json", payload)
        print(json.dumps(payload, sort_keys=True))
    if len(seeds) >= 20:
        rows = growthmod.concentration_report(sweep)
        for row in rows:
            flag = " FLAGGED" if row.flagged else ""
            print(
                f"n={row.n} mean_m={row.mean_m:.6g} sample_var={row.sample_var:.6g} "
                f"predicted_var={row.predicted_var:.6g} ratio={row.ratio:.3f}{flag}"
            )
    return 0


def cmd_growth_fit(args) -> int:
    series = growthmod.ingest_edge_count_series(args.infile)
    fit = growthmod.fit_growth_curve(series)
    payload = {"c1": fit.c1, "c2": fit.c2, "residual_rms": fit.residual, "log": "natural"}
    print(json.dumps(payload, sort_keys=True))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="threshnet", description=__doc__)
    parser.add_argument("--version", action="version", version=f"threshnet {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="sample a graph and write node/edge tables")
    g.add_argument("--n", type=int, required=True)
    _add_pareto_args(g)
    g.add_argument("--d", type=int, default=3)
    g.add_argument("--theta", type=float, default=None)
    g.add_argument("--target-edges", type=float, default=None, dest="target_edges")
    g.add_argument("--schedule", choices=["powerlaw"], default=None)
    g.add_argument("--D", type=float, default=None)
    _add_variant_args(g)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--workers", type=int, default=1)
    g.add_argument("--max-edges", type=int, default=None, dest="max_edges")
    g.add_argument("--out-dir", default=".", dest="out_dir")
    g.set_defaults(func=cmd_generate)

    o = sub.add_parser("oracle", help="evaluate a closed-form probability or moment")
    o.add_argument("kind", choices=_ORACLE_KINDS)
    _add_pareto_args(o)
    o.add_argument("--theta", type=float, default=None)
    o.add_argument("--n", type=int, default=None)
    o.add_argument("--w", type=float, default=None)
    o.add_argument("--alpha", type=float, default=None)
    o.add_argument("--beta", type=float, default=None)
    o.add_argument("--h", type=str, default=None)
    o.add_argument("--D", type=float, default=None)
    o.set_defaults(func=cmd_oracle)

    c = sub.add_parser("calibrate", help="solve the threshold for a target edge count")
    c.add_argument("--n", type=int, required=True)
    _add_pareto_args(c)
    c.add_argument("--target-edges", type=float, required=True, dest="target_edges")
    c.add_argument("--variant", choices=["undirected", "directed"], default="undirected")
    c.add_argument("--alpha", type=float, default=None)
    c.add_argument("--beta", type=float, default=None)
    c.add_argument("--out-dir", default=None, dest="out_dir")
    c.set_defaults(func=cmd_calibrate)

    a = sub.add_parser("analyze", help="fit the degree distribution of an edge list")
    src = a.add_mutually_exclusive_group(required=True)
    src.add_argument("--edges", default=None)
    src.add_argument("--degrees", default=None)
    a.add_argument("--n", type=int, default=None, help="node count (pads isolated nodes)")
    a.add_argument("--directed", action="store_true")
    a.add_argument("--x-min", type=int, default=None, dest="x_min")
    a.add_argument("--bootstrap", type=int, default=0, help="bootstrap replicates (0 = skip)")
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--out-dir", default=".", dest="out_dir")
    a.set_defaults(func=cmd_analyze)

    gr = sub.add_parser("growth", help="growth sweeps and growth-curve fits")
    gr_sub = gr.add_subparsers(dest="growth_command", required=True)
    gs = gr_sub.add_parser("sweep", help="regenerate at each n under a threshold schedule")
    gs.add_argument("--schedule", choices=["powerlaw", "linear"], required=True)
    gs.add_argument("--D", type=float, default=None)
    gs.add_argument("--coeff", type=float, default=None, help="linear schedule: target m = coeff * n")
    _add_pareto_args(gs)
    gs.add_argument("--ns", required=True, help="comma-separated node counts")
    gs.add_argument("--seeds", type=int, default=1)
    gs.add_argument("--workers", type=int, default=1)
    gs.add_argument("--fit", action="store_true")
    gs.add_argument("--out-dir", default=".", dest="out_dir")
    gs.set_defaults(func=cmd_growth_sweep)
    gf = gr_sub.add_parser("fit", help="fit c1*n*ln(n) + c2*n to an ingested series")
    gf.add_argument("--in", dest="infile", required=True)
    gf.set_defaults(func=cmd_growth_fit)

    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    # allow `growth --schedule ...` as shorthand for `growth sweep --schedule ...`
    if argv and argv[0] == "growth" and len(argv) > 1 and argv[1].startswith("--"):
        argv.insert(1, "sweep")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ThreshnetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
