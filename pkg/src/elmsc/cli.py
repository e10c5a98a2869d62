"""Command-line pipeline: cluster, sweep, synth, and eval subcommands.

`cluster` runs seeded end-to-end trials (augmented matrix, solver, spectral
clustering, metrics) and writes a JSON report plus per-trial traces and
labels. `sweep` repeats that over a lambda/latent-dim grid. `synth` writes a
synthetic dataset in the manifest format, and `eval` scores two label files.

Exit codes: 0 success, 1 usage/config error, 2 data error, 3 numerical
failure.
"""

import argparse
import concurrent.futures
import csv
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import dataset as ds_mod
from . import metrics as metrics_mod
from . import solver as solver_mod
from . import spectral as spectral_mod
from ._seeds import rng_from
from .dataset import DatasetError
from .numerics import NumericalError

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3

DEFAULT_LAMBDA_GRID = (1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0, 1000.0)
DEFAULT_K_GRID = (50, 100, 150, 200)
DEFAULT_LATENT_DIM = 100


@dataclass
class RunConfig:
    """Fully resolved configuration for one clustering run."""

    out: str
    clusters: int
    manifest: str = None
    synthetic: dict = None
    lam: float = 1.0
    latent_dim: int = DEFAULT_LATENT_DIM
    trials: int = 10
    seed: int = 0
    ablation: str = "full"
    workers: int = 1
    restarts: int = 10
    random_params: bool = False
    lambda_grid: tuple = field(default=DEFAULT_LAMBDA_GRID)
    k_grid: tuple = field(default=DEFAULT_K_GRID)

    def __post_init__(self):
        if (self.manifest is None) == (self.synthetic is None):
            raise ValueError("exactly one of manifest/synthetic must be given")
        if self.clusters < 2:
            raise ValueError(f"clusters must be >= 2, got {self.clusters}")
        if self.trials < 1:
            raise ValueError(f"trials must be positive, got {self.trials}")
        if self.workers < 1:
            raise ValueError(f"workers must be positive, got {self.workers}")
        if not self.lambda_grid or not self.k_grid:
            raise ValueError("sweep grids must be nonempty")


def _load_or_generate(cfg):
    if cfg.manifest is not None:
        return ds_mod.load_dataset(cfg.manifest)
    spec = dict(cfg.synthetic)
    try:
        return ds_mod.gen_synthetic(
            clusters=int(spec["clusters"]),
            per_cluster=int(spec["per_cluster"]),
            views=int(spec["views"]),
            latent_dim=int(spec["latent_dim"]),
            view_dims=[int(x) for x in spec["view_dims"]],
            noise_sigma=float(spec.get("noise_sigma", 0.0)),
            seed=int(spec.get("seed", 0)),
        )
    except KeyError as exc:
        raise ValueError(f"synthetic spec is missing the {exc} field") from exc


def _trial_job(payload):
    """One end-to-end trial; top-level so worker processes can run it."""
    (xa, clusters, lam, latent_dim, ablation, restarts, trial, trial_seed,
     labels) = payload
    start = time.perf_counter()
    scfg = solver_mod.ElmscConfig(
        lam=lam, latent_dim=latent_dim, seed=trial_seed, ablation=ablation
    )
    out = solver_mod.run(xa, scfg)
    zhat = solver_mod.aggregate_z(out.z, xa.n_views, xa.n_samples)
    result = spectral_mod.cluster(
        zhat, clusters, restarts=restarts, seed=trial_seed
    )
    kkt = solver_mod.kkt_residuals(
        out.state, solver_mod.effective_data(xa, scfg), scfg.effective_lam,
        xa.n_views, xa.n_samples,
    )
    metric_values = None
    if labels is not None:
        pair = metrics_mod.LabelPair(predicted=result.labels, truth=labels)
        metric_values = metrics_mod.all_metrics(pair)
    elapsed = time.perf_counter() - start
    record = {
        "trial": trial,
        "seed": trial_seed,
        "converged": out.converged,
        "iterations": len(out.trace),
        "final_residuals": {
            "r1": out.trace.r1[-1],
            "r2": out.trace.r2[-1],
            "r3": out.trace.r3[-1],
        },
        "kkt": {
            "recon": kkt.recon,
            "selfrep": kkt.selfrep,
            "aux": kkt.aux,
            "e_gap": kkt.e_gap,
            "j_gap": kkt.j_gap,
        },
        "metrics": None if metric_values is None else {
            "acc": metric_values[0],
            "nmi": metric_values[1],
            "ari": metric_values[2],
            "f1": metric_values[3],
        },
        "labels_file": f"labels_{trial}.txt",
        "trace_file": f"trace_{trial}.csv",
        "wall_clock_sec": elapsed,
    }
    return record, result.labels, out.trace, metric_values


def _resolved_config_dict(cfg, pca_components, drawn=None):
    schedule = solver_mod.ElmscConfig(lam=cfg.lam, latent_dim=cfg.latent_dim)
    conf = {
        "manifest": cfg.manifest,
        "synthetic": cfg.synthetic,
        "clusters": cfg.clusters,
        "lambda": cfg.lam,
        "latent_dim": cfg.latent_dim,
        "trials": cfg.trials,
        "seed": cfg.seed,
        "ablation": cfg.ablation,
        "workers": cfg.workers,
        "restarts": cfg.restarts,
        "pca_components": pca_components,
        "mu0": schedule.mu0,
        "mu_max": schedule.mu_max,
        "rho": schedule.rho,
        "tol": schedule.tol,
        "max_iter": schedule.max_iter,
        "seed_derivation": "trial seed = base seed + trial index",
        "random_params": cfg.random_params,
    }
    if drawn is not None:
        conf["random_draw"] = drawn
    return conf


def cmd_cluster(cfg):
    """Run `trials` independent pipelines and write report + artifacts.

    Trial i uses seed = base seed + i for both the solver initialization and
    the k-means restarts. Returns the report dict.
    """
    data = _load_or_generate(cfg)
    labels = data.labels
    if labels is not None and len(np.unique(labels)) < 2:
        raise DatasetError("ground-truth labels must contain >= 2 clusters")

    drawn = None
    if cfg.random_params:
        rng = rng_from(cfg.seed, 101, 7)  # one draw per run, shared by all trials
        cfg.lam = float(rng.choice(np.asarray(cfg.lambda_grid)))
        cfg.latent_dim = int(rng.choice(np.asarray(cfg.k_grid)))
        drawn = {"lambda": cfg.lam, "latent_dim": cfg.latent_dim}

    pca_components = ds_mod.default_pca_components(cfg.clusters, data)
    xa = ds_mod.build_augmented(data, pca_components)

    out_dir = Path(cfg.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    payloads = [
        (xa, cfg.clusters, cfg.lam, cfg.latent_dim, cfg.ablation, cfg.restarts,
         t, cfg.seed + t, labels)
        for t in range(cfg.trials)
    ]
    if cfg.workers > 1:
        with concurrent.futures.ProcessPoolExecutor(cfg.workers) as pool:
            results = list(pool.map(_trial_job, payloads))
    else:
        results = [_trial_job(p) for p in payloads]

    records, trial_tuples = [], []
    for record, pred, trace, metric_values in results:
        records.append(record)
        if metric_values is not None:
            trial_tuples.append(metric_values)
        np.savetxt(out_dir / record["labels_file"], pred, fmt="%d")
        trace.write_csv(out_dir / record["trace_file"])

    aggregate = None
    if trial_tuples:
        aggregate = metrics_mod.aggregate_trials(trial_tuples).as_dict()

    report = {
        "config": _resolved_config_dict(cfg, pca_components, drawn),
        "trials": records,
        "aggregate": aggregate,
    }
    (out_dir / "report.json").write_text(
        json.dumps(report, indent=2, sort_keys=True) + "\n"
    )
    return report


def cmd_sweep(cfg):
    """Cartesian sweep over the lambda and latent-dim grids.

    Each cell runs a full cmd_cluster into its own subdirectory; failures are
    recorded per cell without aborting the sweep. With random_params a single
    uniformly drawn cell runs instead of the full grid. Returns the list of
    cell summaries.
    """
    out_dir = Path(cfg.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    if cfg.random_params:
        rng = rng_from(cfg.seed, 101, 7)
        cells = [(
            float(rng.choice(np.asarray(cfg.lambda_grid))),
            int(rng.choice(np.asarray(cfg.k_grid))),
        )]
    else:
        cells = [(lam, k) for lam in cfg.lambda_grid for k in cfg.k_grid]

    summaries = []
    for lam, k in cells:
        cell_dir = out_dir / f"cell_lam{lam:g}_k{k}"
        cell = {
            "lambda": lam,
            "latent_dim": k,
            "report": str(cell_dir / "report.json"),
        }
        cell_cfg = RunConfig(
            out=str(cell_dir),
            clusters=cfg.clusters,
            manifest=cfg.manifest,
            synthetic=cfg.synthetic,
            lam=lam,
            latent_dim=k,
            trials=cfg.trials,
            seed=cfg.seed,
            ablation=cfg.ablation,
            workers=cfg.workers,
            restarts=cfg.restarts,
        )
        try:
            report = cmd_cluster(cell_cfg)
        except (ValueError, DatasetError, NumericalError, OSError) as exc:
            cell.update(status="failed", error=f"{type(exc).__name__}: {exc}")
            summaries.append(cell)
            continue
        cell["status"] = "ok"
        cell["random_params"] = cfg.random_params
        if report["aggregate"] is not None:
            for name, stats in report["aggregate"].items():
                cell[f"{name}_mean"] = stats["mean"]
                cell[f"{name}_std"] = stats["std"]
        summaries.append(cell)

    columns = [
        "lambda", "latent_dim", "status",
        "acc_mean", "acc_std", "nmi_mean", "nmi_std",
        "ari_mean", "ari_std", "f1_mean", "f1_std",
        "report", "error",
    ]
    with open(out_dir / "summary.csv", "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=columns, extrasaction="ignore")
        writer.writeheader()
        for cell in summaries:
            writer.writerow({k: cell.get(k, "") for k in columns})
    return summaries


def cmd_synth(spec, out_dir):
    """Write a synthetic dataset (views, labels, manifest) to out_dir."""
    data = ds_mod.gen_synthetic(
        clusters=int(spec["clusters"]),
        per_cluster=int(spec["per_cluster"]),
        views=int(spec["views"]),
        latent_dim=int(spec["latent_dim"]),
        view_dims=[int(x) for x in spec["view_dims"]],
        noise_sigma=float(spec.get("noise_sigma", 0.0)),
        seed=int(spec.get("seed", 0)),
    )
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    entries = []
    for i, view in enumerate(data.views):
        name = f"view{i}"
        fname = f"{name}.txt"
        # 17 significant digits so reloading reproduces float64 exactly
        np.savetxt(out / fname, view, fmt="%.17e")
        entries.append({
            "name": name,
            "path": fname,
            "rows": view.shape[0],
            "cols": view.shape[1],
        })
    np.savetxt(out / "labels.txt", data.labels, fmt="%d")
    manifest = {"n": data.n_samples, "views": entries, "labels": "labels.txt"}
    path = out / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path


def _read_label_file(path):
    try:
        return np.loadtxt(path, dtype=np.int64, ndmin=1)
    except OSError as exc:
        raise DatasetError(f"cannot read label file {path}: {exc}") from exc
    except ValueError as exc:
        raise DatasetError(f"label file {path} is not integer-valued: {exc}") from exc


def cmd_eval(predicted_path, truth_path):
    """Score a predicted label file against a ground-truth one."""
    predicted = _read_label_file(predicted_path)
    truth = _read_label_file(truth_path)
    pair = metrics_mod.LabelPair(predicted=predicted, truth=truth)
    values = metrics_mod.all_metrics(pair)
    for name, val in zip(("ACC", "NMI", "AR", "F1"), values):
        print(f"{name} {val * 100:.2f}")
    return values


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(EXIT_CONFIG)


def _add_common(p):
    p.add_argument("--manifest", help="dataset manifest (JSON)")
    p.add_argument("--synthetic", help="inline synthetic dataset spec (JSON)")
    p.add_argument("--clusters", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0,
                   help="sparsity weight (default 1.0)")
    p.add_argument("--latent-dim", type=int, default=DEFAULT_LATENT_DIM)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--ablation", choices=("full", "v1", "v2"), default="full")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--restarts", type=int, default=10,
                   help="k-means restarts per trial")
    p.add_argument("--random-params", action="store_true",
                   help="draw lambda and latent-dim uniformly from the grids")


def build_parser():
    parser = _Parser(prog="elmsc",
                     description="Multi-view subspace clustering pipeline")
    sub = parser.add_subparsers(dest="command", required=True)

    p_cluster = sub.add_parser("cluster", help="run end-to-end trials")
    _add_common(p_cluster)

    p_sweep = sub.add_parser("sweep", help="grid sweep over lambda and latent dim")
    _add_common(p_sweep)
    p_sweep.add_argument("--lambda-grid", type=float, nargs="+",
                         default=list(DEFAULT_LAMBDA_GRID))
    p_sweep.add_argument("--k-grid", type=int, nargs="+",
                         default=list(DEFAULT_K_GRID))

    p_synth = sub.add_parser("synth", help="generate a synthetic dataset")
    p_synth.add_argument("--spec", required=True,
                         help="synthetic dataset spec (JSON)")
    p_synth.add_argument("--out", required=True)

    p_eval = sub.add_parser("eval", help="score predicted labels against truth")
    p_eval.add_argument("predicted")
    p_eval.add_argument("truth")
    return parser


def _parse_json_arg(text, what):
    try:
        value = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{what} is not valid JSON: {exc}") from exc
    if not isinstance(value, dict):
        raise ValueError(f"{what} must be a JSON object")
    return value


def _run_config_from_args(args):
    synthetic = None
    if args.synthetic is not None:
        synthetic = _parse_json_arg(args.synthetic, "--synthetic")
    kwargs = dict(
        out=args.out,
        clusters=args.clusters,
        manifest=args.manifest,
        synthetic=synthetic,
        lam=args.lam,
        latent_dim=args.latent_dim,
        trials=args.trials,
        seed=args.seed,
        ablation=args.ablation,
        workers=args.workers,
        restarts=args.restarts,
        random_params=args.random_params,
    )
    if getattr(args, "lambda_grid", None) is not None:
        kwargs["lambda_grid"] = tuple(args.lambda_grid)
    if getattr(args, "k_grid", None) is not None:
        kwargs["k_grid"] = tuple(args.k_grid)
    return RunConfig(**kwargs)


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "cluster":
            cmd_cluster(_run_config_from_args(args))
        elif args.command == "sweep":
            cmd_sweep(_run_config_from_args(args))
        elif args.command == "synth":
            path = cmd_synth(_parse_json_arg(args.spec, "--spec"), args.out)
            print(path)
        elif args.command == "eval":
            cmd_eval(args.predicted, args.truth)
        return EXIT_OK
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_OK
    except ValueError as exc:
        _emit_error(exc)
        return EXIT_CONFIG
    except (DatasetError, OSError) as exc:
        _emit_error(exc)
        return EXIT_DATA
    except NumericalError as exc:
        _emit_error(exc)
        return EXIT_NUMERIC


def _emit_error(exc):
    record = {"error": type(exc).__name__, "message": str(exc)}
    sys.stderr.write(json.dumps(record, sort_keys=True) + "\n")


if __name__ == "__main__":
    sys.exit(main())
