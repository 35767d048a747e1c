"""Command-line interface.

Subcommands: ``gen`` (datasets), ``dist`` (graph-derived matrices),
``embed`` (single embedding with hyperparameter search), ``bench``
(experiment suites) and ``render`` (PGM/PPM rasters).  Every randomized
subcommand requires an explicit ``--seed``; given identical flags the
outputs are bit-identical.

Exit codes: 0 success, 2 usage or invalid parameters, 3 I/O failure,
4 data errors (e.g. disconnected graph), 5 benchmark with no surviving
record.  When ``--out`` is omitted, payload data goes to stdout and the
machine-readable summary line moves to stderr; otherwise stdout carries
exactly one JSON summary line per operation.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import bench as bench_mod
from . import render as render_mod
from .embedding import EmbeddingDiverged, random_search
from .graphs import (
    Graph,
    GraphConnectivityError,
    load_graph,
    load_matrix,
    make_barabasi_albert,
    make_erdos_renyi,
    random_points_distance_matrix,
    random_walk_similarity,
    save_graph,
    save_matrix,
    shortest_path_matrix,
)
from .manifolds import MANIFOLDS
from .validation import matrix_kind

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_DATA = 4
EXIT_ALL_FAILED = 5


def _summary(payload: dict, to_stderr: bool) -> None:
    stream = sys.stderr if to_stderr else sys.stdout
    print(json.dumps(payload, sort_keys=True), file=stream)


def _write_or_print_matrix(M, out) -> None:
    if out is None:
        np.savetxt(sys.stdout, M, delimiter=",", fmt="%.17g")
    else:
        save_matrix(M, out)


def _write_or_print_graph(g: Graph, out) -> None:
    if out is None:
        sys.stdout.write(str(g.n) + "\n")
        for i, j in g.edges:
            sys.stdout.write(f"{i} {j}\n")
    else:
        save_graph(g, out)


def cmd_gen(args) -> int:
    if args.kind == "er":
        g = make_erdos_renyi(args.n, args.p, args.seed)
        dataset_id = f"er-n{args.n}-p{args.p:g}-seed{args.seed}"
        _write_or_print_graph(g, args.out)
        info = {"dataset_id": dataset_id, "n": g.n, "edges": g.num_edges}
    elif args.kind == "ba":
        g = make_barabasi_albert(args.n, args.m, args.seed)
        dataset_id = f"ba-n{args.n}-m{args.m}-seed{args.seed}"
        _write_or_print_graph(g, args.out)
        info = {"dataset_id": dataset_id, "n": g.n, "edges": g.num_edges}
    else:
        D = random_points_distance_matrix(args.n, args.seed)
        dataset_id = f"points-n{args.n}-seed{args.seed}"
        _write_or_print_matrix(D, args.out)
        info = {"dataset_id": dataset_id, "n": args.n}
    if args.out is not None:
        info["out"] = str(args.out)
    _summary(info, to_stderr=args.out is None)
    return EXIT_OK


def _load_input_graph(args) -> Graph:
    if args.graph is not None:
        return load_graph(args.graph)
    A = load_matrix(args.matrix)
    if A.shape[0] != A.shape[1]:
        raise ValueError(f"adjacency matrix must be square, got {A.shape}")
    if not np.array_equal(A, A.T) or np.any((A != 0) & (A != 1)) or np.any(np.diag(A) != 0):
        raise ValueError("adjacency matrix must be symmetric 0/1 with a zero diagonal")
    n = A.shape[0]
    iu, ju = np.nonzero(np.triu(A, k=1))
    return Graph(n, tuple(zip(iu.tolist(), ju.tolist())))


def cmd_dist(args) -> int:
    g = _load_input_graph(args)
    if args.op == "apsp":
        M = shortest_path_matrix(g)
        info = {"op": "apsp", "n": g.n}
    else:
        if args.steps < 1:
            raise ValueError(f"--steps must be >= 1, got {args.steps}")
        M = random_walk_similarity(g, args.steps)
        info = {"op": "rw", "n": g.n, "steps": args.steps}
    _write_or_print_matrix(M, args.out)
    if args.out is not None:
        info["out"] = str(args.out)
    _summary(info, to_stderr=args.out is None)
    return EXIT_OK


def cmd_embed(args) -> int:
    M = load_matrix(args.target)
    if args.as_kind is not None:
        loss = "stress" if args.as_kind == "dist" else "kl"
    else:
        detected = matrix_kind(M)
        if detected == "distance":
            loss = "stress"
        elif detected == "similarity":
            loss = "kl"
        elif detected == "ambiguous":
            raise ValueError(
                "target matrix is both a valid distance and similarity matrix; "
                "pass --as dist or --as sim"
            )
        else:
            raise ValueError(
                "target matrix is neither a distance nor a similarity matrix; "
                "pass --as dist or --as sim to force an interpretation"
            )
    config, result = random_search(
        M, args.kind, args.d, loss=loss, trials=args.trials, seed=args.seed
    )
    _write_or_print_matrix(result.Y, args.out)
    info = {
        "loss": result.final_loss,
        "loss_kind": loss,
        "kind": args.kind,
        "d": args.d,
        "lr": config.learning_rate,
        "batch": config.batch_size,
        "epochs": result.epochs_run,
        "trials": args.trials,
        "seed": args.seed,
    }
    if args.out is not None:
        info["out"] = str(args.out)
    _summary(info, to_stderr=args.out is None)
    return EXIT_OK


def cmd_bench(args) -> int:
    spec = bench_mod.load_spec(args.spec)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    results_csv = out_dir / "results.csv"
    records, failures = bench_mod.run_suite(spec, out_csv=results_csv, workers=args.workers)
    if records:
        bench_mod.write_summary_csv(bench_mod.summarize(records), out_dir / "summary.csv")
    _summary(
        {
            "dataset_id": spec.dataset_id,
            "records": len(records),
            "failures": len(failures),
            "results_csv": str(results_csv),
        },
        to_stderr=False,
    )
    return EXIT_OK if records else EXIT_ALL_FAILED


def _parse_center(text: str) -> np.ndarray:
    return np.array([float(v) for v in text.split(",")])


def _load_sites(path) -> list[np.ndarray]:
    sites = []
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        sites.append(np.array([float(v) for v in line.replace(",", " ").split()]))
    return sites


def cmd_render(args) -> int:
    if args.what == "balls":
        field, levels = render_mod.distance_field(args.dist, _parse_center(args.center), args.res)
        render_mod.write_pgm(field, args.out)
        if args.levels_out is not None:
            Path(args.levels_out).write_text(
                "\n".join(f"{lv:.17g}" for lv in levels) + "\n", encoding="ascii"
            )
        info = {"out": str(args.out), "res": args.res, "dist": args.dist, "levels": levels}
    else:
        labels = render_mod.voronoi_labels(_load_sites(args.sites), args.dist, args.res)
        render_mod.write_ppm(labels, args.out)
        info = {"out": str(args.out), "res": args.res, "dist": args.dist,
                "sites": int(labels.max()) + 1}
    _summary(info, to_stderr=False)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hilbertsimplex",
        description="Simplex geometry distances, graph embeddings, and benchmarks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="generate a dataset")
    gen_sub = p_gen.add_subparsers(dest="kind", required=True)
    p_er = gen_sub.add_parser("er", help="connected Erdos-Renyi graph")
    p_er.add_argument("--n", type=int, required=True)
    p_er.add_argument("--p", type=float, required=True)
    p_ba = gen_sub.add_parser("ba", help="Barabasi-Albert graph")
    p_ba.add_argument("--n", type=int, required=True)
    p_ba.add_argument("--m", type=int, required=True)
    p_pts = gen_sub.add_parser("points", help="Gaussian random-points distance matrix")
    p_pts.add_argument("--n", type=int, required=True)
    for p in (p_er, p_ba, p_pts):
        p.add_argument("--seed", type=int, required=True)
        p.add_argument("--out", default=None)
        p.set_defaults(func=cmd_gen)

    p_dist = sub.add_parser("dist", help="derive a matrix from a graph")
    dist_sub = p_dist.add_subparsers(dest="op", required=True)
    p_apsp = dist_sub.add_parser("apsp", help="all-pairs shortest path hop counts")
    p_rw = dist_sub.add_parser("rw", help="random-walk similarity matrix")
    p_rw.add_argument("--steps", type=int, default=5)
    for p in (p_apsp, p_rw):
        group = p.add_mutually_exclusive_group(required=True)
        group.add_argument("--graph", default=None, help="edge-list file")
        group.add_argument("--matrix", default=None, help="adjacency-matrix CSV")
        p.add_argument("--out", default=None)
        p.set_defaults(func=cmd_dist)

    p_embed = sub.add_parser("embed", help="embed a target matrix")
    p_embed.add_argument("--target", required=True, help="distance or similarity CSV")
    p_embed.add_argument("--kind", required=True, choices=MANIFOLDS)
    p_embed.add_argument("--d", type=int, required=True)
    p_embed.add_argument("--trials", type=int, default=30)
    p_embed.add_argument("--seed", type=int, required=True)
    p_embed.add_argument("--as", dest="as_kind", choices=("dist", "sim"), default=None)
    p_embed.add_argument("--out", default=None)
    p_embed.set_defaults(func=cmd_embed)

    p_bench = sub.add_parser("bench", help="run an experiment suite")
    p_bench.add_argument("--spec", required=True, help="key = value spec file")
    p_bench.add_argument("--workers", type=int, default=1)
    p_bench.add_argument("--out", required=True, help="output directory")
    p_bench.set_defaults(func=cmd_bench)

    p_render = sub.add_parser("render", help="write PGM/PPM rasters")
    render_sub = p_render.add_subparsers(dest="what", required=True)
    p_balls = render_sub.add_parser("balls", help="distance field around a center")
    p_balls.add_argument("--dist", required=True, choices=render_mod.FIELD_DISTANCES)
    p_balls.add_argument("--center", required=True, help="comma-separated 3 coordinates")
    p_balls.add_argument("--levels-out", default=None)
    p_voronoi = render_sub.add_parser("voronoi", help="nearest-site labeling")
    p_voronoi.add_argument("--dist", required=True, choices=render_mod.VORONOI_DISTANCES)
    p_voronoi.add_argument("--sites", required=True, help="one comma-separated site per line")
    for p in (p_balls, p_voronoi):
        p.add_argument("--res", type=int, default=256)
        p.add_argument("--out", required=True)
        p.set_defaults(func=cmd_render)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GraphConnectivityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except EmbeddingDiverged as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
