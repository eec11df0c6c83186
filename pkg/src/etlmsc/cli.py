"""Command-line front end.

Four subcommands: ``gen`` writes a synthetic multi-view corpus, ``cluster``
runs the full pipeline on view matrices, ``baselines`` adds the per-view and
mean-matrix reference methods, ``eval`` scores a label file against truth.

File formats: view matrices are headerless CSV, one row per sample, one
column per feature (UTF-8, LF, '.' decimal); label files are one base-10
integer per line, 0-indexed.  Structured results go to ``result.json``,
matrices to CSV.  Every command is deterministic given its flags and seed,
and ``result.json`` echoes the fully resolved configuration.

Exit codes: 0 success, 1 input error, 2 solver hit max_iters (outputs are
still written).

Heavy numeric imports happen inside the handlers, after ``--threads`` is
applied: BLAS/OpenMP pools size themselves from the environment at import.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

_SOLVER_KEYS = ("lam", "mu0", "rho", "mu_max", "eps", "max_iters", "rotated")
_SHARED_KEYS = _SOLVER_KEYS + (
    "views",
    "truth",
    "clusters",
    "sigma_ratio",
    "seed",
    "restarts",
    "normalize_rows",
    "out",
    "threads",
)

_DEFAULTS = {
    "lam": None,
    "mu0": 1e-3,
    "rho": 2.0,
    "mu_max": 1e8,
    "eps": 1e-6,
    "max_iters": 200,
    "rotated": True,
    "truth": None,
    "sigma_ratio": 1.0,
    "seed": 0,
    "restarts": 20,
    "normalize_rows": False,
    "out": ".",
    "threads": None,
}


def _str2bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("true", "1", "yes"):
        return True
    if lowered in ("false", "0", "no"):
        return False
    raise argparse.ArgumentTypeError(f"expected a boolean, got {text!r}")


def _add_shared_flags(sub: argparse.ArgumentParser):
    sub.add_argument("--views", nargs="+", required=True, help="view CSV files (row per sample)")
    sub.add_argument("--truth", help="optional ground-truth label file")
    sub.add_argument("--clusters", type=int, required=True, help="number of clusters C (>= 2)")
    sub.add_argument("--lambda", dest="lam", type=float, help="sparsity weight (default 1/sqrt(n3*max(n1,n2)))")
    sub.add_argument("--sigma-ratio", type=float, help="kernel bandwidth / average pairwise distance (default 1)")
    sub.add_argument("--seed", type=int, help="random seed (default 0)")
    sub.add_argument("--restarts", type=int, help="k-means restarts (default 20)")
    sub.add_argument("--rotated", type=_str2bool, help="solve on the rotated tensor (default true)")
    sub.add_argument("--mu0", type=float, help="initial ADMM penalty (default 1e-3)")
    sub.add_argument("--rho", type=float, help="penalty growth factor (default 2)")
    sub.add_argument("--mu-max", type=float, help="penalty cap (default 1e8)")
    sub.add_argument("--eps", type=float, help="stopping tolerance (default 1e-6)")
    sub.add_argument("--max-iters", type=int, help="ADMM iteration cap (default 200)")
    sub.add_argument("--normalize-rows", type=_str2bool, help="length-normalize embedding rows before k-means (default false)")
    sub.add_argument("--out", help="output directory (default .)")
    sub.add_argument("--threads", type=int, help="BLAS/OpenMP thread count (default: all cores)")
    sub.add_argument("--config", help="JSON config file; precedence: flags > config > defaults")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="etlmsc",
        description="Essential tensor learning for multi-view spectral clustering",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    cluster = subs.add_parser("cluster", help="run the full pipeline on view matrices")
    _add_shared_flags(cluster)

    base = subs.add_parser("baselines", help="run per-view / mean-matrix baselines plus the pipeline")
    _add_shared_flags(base)

    gen = subs.add_parser("gen", help="write a synthetic multi-view corpus")
    gen.add_argument("--samples", type=int, required=True)
    gen.add_argument("--clusters", type=int, required=True)
    gen.add_argument("--num-views", type=int, required=True)
    gen.add_argument("--dims", type=int, nargs="+", default=[6], help="feature dims, one value or one per view")
    gen.add_argument("--separation", type=float, default=10.0)
    gen.add_argument("--noise", type=float, nargs="+", default=[1.0], help="noise std, one value or one per view")
    gen.add_argument("--complementary", type=_str2bool, default=False)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", default=".")

    ev = subs.add_parser("eval", help="score predicted labels against truth")
    ev.add_argument("truth", help="ground-truth label file")
    ev.add_argument("pred", help="predicted label file")
    return parser


def _resolve(args: argparse.Namespace) -> dict:
    """Merge flags over an optional JSON config over built-in defaults."""
    config = {}
    if getattr(args, "config", None):
        with open(args.config, "r", encoding="utf-8") as fh:
            config = json.load(fh)
    resolved = {}
    for key in _SHARED_KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            resolved[key] = flag
        elif key in config:
            resolved[key] = config[key]
        else:
            resolved[key] = _DEFAULTS.get(key)
    return resolved


def _apply_threads(threads):
    if threads is None:
        return
    for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ[var] = str(int(threads))


def _load_matrix(path: str):
    import numpy as np

    if not Path(path).is_file():
        raise FileNotFoundError(f"view file not found: {path}")
    data = np.loadtxt(path, delimiter=",", ndmin=2, dtype=np.float64)
    return data


def _load_labels(path: str):
    import numpy as np

    if not Path(path).is_file():
        raise FileNotFoundError(f"label file not found: {path}")
    return np.loadtxt(path, dtype=np.int64, ndmin=1)


def _write_labels(path: Path, labels):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for value in labels:
            fh.write(f"{int(value)}\n")


def _write_matrix(path: Path, matrix):
    import numpy as np

    np.savetxt(path, np.asarray(matrix), fmt="%.17g", delimiter=",", newline="\n")


def _metrics_or_none(truth, labels):
    from .metrics import all_metrics

    return all_metrics(truth, labels) if truth is not None else None


def _solver_config(resolved):
    from .solver import SolverConfig

    return SolverConfig(**{key: resolved[key] for key in _SOLVER_KEYS})


def _cmd_cluster(args) -> int:
    resolved = _resolve(args)
    _apply_threads(resolved["threads"])
    from .errors import NotConverged
    from .graph import condition_transition, markov_spectral_cluster
    from .solver import admm_solve, build_probability_tensor

    if resolved["clusters"] < 2:
        raise ValueError("clustering needs --clusters >= 2")
    views = [_load_matrix(p) for p in resolved["views"]]
    truth = _load_labels(resolved["truth"]) if resolved["truth"] else None
    out = Path(resolved["out"])
    out.mkdir(parents=True, exist_ok=True)

    t_start = time.perf_counter()
    p = build_probability_tensor(views, resolved["sigma_ratio"], resolved["rotated"])
    t_build = time.perf_counter()
    exit_code = 0
    try:
        result = admm_solve(p, _solver_config(resolved))
    except NotConverged as exc:
        result = exc.result
        exit_code = 2
    t_solve = time.perf_counter()
    part = markov_spectral_cluster(
        result.zstar,
        resolved["clusters"],
        seed=resolved["seed"],
        restarts=resolved["restarts"],
        normalize_rows=resolved["normalize_rows"],
    )
    t_cluster = time.perf_counter()

    _write_labels(out / "labels.csv", part.labels)
    _write_matrix(out / "zstar.csv", condition_transition(result.zstar))
    payload = {
        "config": {**resolved, "lam": result.lam},
        "metrics": _metrics_or_none(truth, part.labels),
        "converged": result.converged,
        "trace": result.trace.as_dict(),
        "timings": {
            "build_tensor_sec": t_build - t_start,
            "solve_sec": t_solve - t_build,
            "cluster_sec": t_cluster - t_solve,
            "total_sec": t_cluster - t_start,
        },
    }
    with open(out / "result.json", "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    print(json.dumps({"out": str(out), "converged": result.converged, "metrics": payload["metrics"]}))
    return exit_code


def _cmd_baselines(args) -> int:
    resolved = _resolve(args)
    _apply_threads(resolved["threads"])
    from .errors import NotConverged
    from .graph import markov_spectral_cluster
    from .solver import admm_solve, baselines, build_probability_tensor

    if resolved["clusters"] < 2:
        raise ValueError("clustering needs --clusters >= 2")
    views = [_load_matrix(p) for p in resolved["views"]]
    truth = _load_labels(resolved["truth"]) if resolved["truth"] else None
    out = Path(resolved["out"])
    out.mkdir(parents=True, exist_ok=True)

    parts = baselines(
        views,
        resolved["clusters"],
        seed=resolved["seed"],
        sigma_ratio=resolved["sigma_ratio"],
        truth=truth,
        restarts=resolved["restarts"],
    )
    exit_code = 0
    p = build_probability_tensor(views, resolved["sigma_ratio"], resolved["rotated"])
    try:
        result = admm_solve(p, _solver_config(resolved))
    except NotConverged as exc:
        result = exc.result
        exit_code = 2
    parts["etlmsc"] = markov_spectral_cluster(
        result.zstar,
        resolved["clusters"],
        seed=resolved["seed"],
        restarts=resolved["restarts"],
        normalize_rows=resolved["normalize_rows"],
    )

    rows = []
    for name in sorted(parts):
        _write_labels(out / f"labels_{name}.csv", parts[name].labels)
        if truth is not None:
            metrics = _metrics_or_none(truth, parts[name].labels)
            rows.append((name, metrics))
    if truth is not None:
        with open(out / "comparison.csv", "w", encoding="utf-8", newline="\n") as fh:
            fh.write("method,nmi,acc,ari,f_score,precision,recall\n")
            for name, m in rows:
                fh.write(
                    f"{name},{m['nmi']:.17g},{m['acc']:.17g},{m['ari']:.17g},"
                    f"{m['f_score']:.17g},{m['precision']:.17g},{m['recall']:.17g}\n"
                )
    print(json.dumps({"out": str(out), "methods": sorted(parts)}))
    return exit_code


def _cmd_gen(args) -> int:
    from .datagen import MultiViewSpec, gen_multiview

    spec = MultiViewSpec(
        n_samples=args.samples,
        n_clusters=args.clusters,
        n_views=args.num_views,
        dims=tuple(args.dims),
        separation=args.separation,
        noise=tuple(args.noise),
        complementary=args.complementary,
        seed=args.seed,
    )
    views, truth = gen_multiview(spec)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for v, x in enumerate(views, start=1):
        path = out / f"view_{v}.csv"
        _write_matrix(path, x)
        paths.append(str(path))
    _write_labels(out / "truth.csv", truth.labels)
    manifest = {
        "samples": spec.n_samples,
        "clusters": spec.n_clusters,
        "views": paths,
        "truth": str(out / "truth.csv"),
        "dims": list(spec.dims),
        "separation": spec.separation,
        "noise": list(spec.noise),
        "complementary": spec.complementary,
        "seed": spec.seed,
    }
    print(json.dumps(manifest, indent=2))
    return 0


def _cmd_eval(args) -> int:
    from .metrics import all_metrics

    truth = _load_labels(args.truth)
    pred = _load_labels(args.pred)
    print(json.dumps(all_metrics(truth, pred), indent=2))
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "cluster": _cmd_cluster,
        "baselines": _cmd_baselines,
        "gen": _cmd_gen,
        "eval": _cmd_eval,
    }
    try:
        return handlers[args.command](args)
    except Exception as exc:  # input / numeric errors -> exit 1 with a diagnostic
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
