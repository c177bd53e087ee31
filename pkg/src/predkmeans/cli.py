"""Command-line interface.

Subcommands: ``run`` (corruption-sweep experiment), ``pca`` (fit a CSV and
print the explained-variance table), ``kmeans`` (plain clustering of a
CSV), ``inspect`` (dataset stats).  Exit codes: 0 success, 1 configuration
or usage error, 2 data error.
"""

import argparse
import json
import sys

from .bench import (
    DEFAULT_RATES,
    ExperimentConfig,
    emit_results,
    load_dataset,
    run_experiment,
)
from .datasets import load_edge_list
from .errors import ConfigError, DomainError, FormatError, NumericalError
from .kmeans import LloydConfig, best_of_kmeans
from .pca import PcaPolicy, fit as pca_fit, save_model, transform as pca_transform
from .pipeline import SeedingMode


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems as ConfigError (exit code 1)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="predkmeans", description=__doc__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    run = sub.add_parser("run", help="run a corruption-sweep experiment")
    run.add_argument("--config", help="flat JSON config file; flags override it")
    run.add_argument("--data", help="dataset spec (synth:.., csv:.., cifar:.., edges:.., or a CSV path)")
    run.add_argument("--k", type=int)
    run.add_argument("--pca-dim", type=int, help="retain a fixed number of components")
    run.add_argument("--pca-evr", type=float, help="retain components up to this EVR")
    run.add_argument("--rates", help="comma-separated error rates (default 0.0..1.0 step 0.1)")
    run.add_argument("--trials", type=int)
    run.add_argument("--seed", type=int, help="master seed")
    run.add_argument("--trim-alpha", type=float, help="seed centers with trimmed means")
    run.add_argument("--no-refine", action="store_true", default=None,
                     help="emit only the seed-only variant")
    run.add_argument("--baseline-restarts", type=int)
    run.add_argument("--max-iters", type=int)
    run.add_argument("--tol", type=float)
    run.add_argument("--subsample", type=int)
    run.add_argument("--subsample-seed", type=int)
    run.add_argument("--csv-header", action="store_true", default=None)
    run.add_argument("--embed-dim", type=int)
    run.add_argument("--cifar-raw", action="store_true", default=None)
    run.add_argument("--out", required=True)
    run.add_argument("--format", choices=["csv", "json"])
    run.set_defaults(func=_cmd_run)

    pca = sub.add_parser("pca", help="fit PCA on a CSV and print the EVR table")
    pca.add_argument("--data", required=True)
    pca.add_argument("--pca-dim", type=int)
    pca.add_argument("--pca-evr", type=float)
    pca.add_argument("--standardize", action="store_true")
    pca.add_argument("--csv-header", action="store_true")
    pca.add_argument("--save-model", help="write the fitted model as JSON")
    pca.add_argument("--out", help="write the transformed data as CSV")
    pca.set_defaults(func=_cmd_pca)

    km = sub.add_parser("kmeans", help="plain k-means clustering of a CSV")
    km.add_argument("--data", required=True)
    km.add_argument("--k", type=int, required=True)
    km.add_argument("--restarts", type=int, default=10)
    km.add_argument("--seed", type=int, default=0)
    km.add_argument("--max-iters", type=int, default=100)
    km.add_argument("--tol", type=float, default=1e-6)
    km.add_argument("--init", choices=["kmeanspp", "uniform"], default="kmeanspp")
    km.add_argument("--csv-header", action="store_true")
    km.add_argument("--out", help="write labels, one per line")
    km.set_defaults(func=_cmd_kmeans)

    ins = sub.add_parser("inspect", help="print dataset statistics")
    ins.add_argument("--data", required=True)
    ins.add_argument("--csv-header", action="store_true")
    ins.add_argument("--embed-dim", type=int, default=2)
    ins.set_defaults(func=_cmd_inspect)

    return parser


def _pca_policy(pca_dim, pca_evr) -> PcaPolicy | None:
    if pca_dim is not None and pca_evr is not None:
        raise ConfigError("use either --pca-dim or --pca-evr, not both")
    if pca_dim is not None:
        return PcaPolicy.fixed(pca_dim)
    if pca_evr is not None:
        return PcaPolicy.threshold(pca_evr)
    return None


def _parse_rates(text: str) -> tuple:
    try:
        return tuple(float(part) for part in text.split(","))
    except ValueError:
        raise ConfigError(f"bad rates list {text!r}") from None


def _load_config_file(path) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path}: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigError(f"config file {path} must hold a flat JSON object")
    return doc


def _merged(args, file_cfg: dict, flag: str, default, convert=None):
    """Flag value if given, else config-file value, else the default."""
    value = getattr(args, flag.replace("-", "_"))
    if value is None and flag in file_cfg:
        value = file_cfg[flag]
    if value is None:
        return default
    if convert is not None:
        try:
            return convert(value)
        except (TypeError, ValueError):
            raise ConfigError(f"bad value for {flag!r}: {value!r}") from None
    return value


def _cmd_run(args) -> int:
    file_cfg = _load_config_file(args.config) if args.config else {}
    unknown = set(file_cfg) - {
        "data", "k", "pca-dim", "pca-evr", "rates", "trials", "seed",
        "trim-alpha", "no-refine", "baseline-restarts", "max-iters", "tol",
        "subsample", "subsample-seed", "csv-header", "embed-dim", "cifar-raw",
        "format",
    }
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")

    data = _merged(args, file_cfg, "data", None, convert=str)
    if data is None:
        raise ConfigError("a dataset is required (--data or config 'data')")
    k = _merged(args, file_cfg, "k", None, convert=int)
    if k is None:
        raise ConfigError("k is required (--k or config 'k')")

    rates = _merged(args, file_cfg, "rates", None)
    if isinstance(rates, str):
        rates = _parse_rates(rates)
    elif isinstance(rates, list):
        rates = tuple(float(r) for r in rates)

    trim_alpha = _merged(args, file_cfg, "trim-alpha", None, convert=float)
    no_refine = bool(_merged(args, file_cfg, "no-refine", False))
    variants = ("seed-only",) if no_refine else ("seed-only", "refined")

    subsample_n = _merged(args, file_cfg, "subsample", None, convert=int)
    subsample = None
    if subsample_n is not None:
        subsample = (subsample_n,
                     _merged(args, file_cfg, "subsample-seed", 0, convert=int))

    master_seed = _merged(args, file_cfg, "seed", 0, convert=int)
    try:
        seeding = (
            SeedingMode.trimmed_mean(trim_alpha)
            if trim_alpha is not None
            else SeedingMode.coordinate_mean()
        )
        cfg = ExperimentConfig(
            dataset=data,
            k=k,
            error_rates=rates if rates is not None else DEFAULT_RATES,
            trials=_merged(args, file_cfg, "trials", 5, convert=int),
            pca=_pca_policy(
                _merged(args, file_cfg, "pca-dim", None, convert=int),
                _merged(args, file_cfg, "pca-evr", None, convert=float),
            ),
            seeding=seeding,
            lloyd=LloydConfig(
                max_iters=_merged(args, file_cfg, "max-iters", 100, convert=int),
                tol=_merged(args, file_cfg, "tol", 1e-6, convert=float),
                seed=master_seed,
            ),
            variants=variants,
            baseline_restarts=_merged(args, file_cfg, "baseline-restarts", 10,
                                      convert=int),
            master_seed=master_seed,
            subsample=subsample,
            csv_has_header=bool(_merged(args, file_cfg, "csv-header", False)),
            embed_dim=_merged(args, file_cfg, "embed-dim", 2, convert=int),
            cifar_raw=bool(_merged(args, file_cfg, "cifar-raw", False)),
        )
    except DomainError as exc:
        # Bad parameter ranges are configuration problems at this surface.
        raise ConfigError(str(exc)) from None
    result = run_experiment(cfg)
    fmt = _merged(args, file_cfg, "format", "csv")
    emit_results(result, fmt, args.out)
    print(f"wrote {len(result.cells)} cells to {args.out} "
          f"(baseline cost {result.baseline_cost:.6g})")
    return 0


def _cmd_pca(args) -> int:
    policy = _pca_policy(args.pca_dim, args.pca_evr)
    if policy is None:
        raise ConfigError("pca needs --pca-dim or --pca-evr")
    from .datasets import load_csv

    X = load_csv(args.data, has_header=args.csv_header)
    model = pca_fit(X, policy, standardize=args.standardize)
    print(f"rows={X.shape[0]} cols={X.shape[1]} retained={model.retained}"
          + (" (degenerate)" if model.degenerate else ""))
    print(f"{'component':>9}  {'eigenvalue':>14}  {'evr':>9}  {'cumulative':>10}")
    cumulative = 0.0
    for i, (lam, ratio) in enumerate(zip(model.eigenvalues_all, model.evr), start=1):
        cumulative += float(ratio)
        marker = "*" if i <= model.retained else " "
        print(f"{i:>8}{marker}  {lam:>14.6g}  {ratio:>9.6f}  {cumulative:>10.6f}")
    if args.save_model:
        save_model(model, args.save_model)
        print(f"model saved to {args.save_model}")
    if args.out:
        Y = pca_transform(model, X)
        with open(args.out, "w", encoding="utf-8") as fh:
            for row in Y:
                fh.write(",".join(repr(float(v)) for v in row) + "\n")
        print(f"transformed data written to {args.out}")
    return 0


def _cmd_kmeans(args) -> int:
    from .datasets import load_csv

    X = load_csv(args.data, has_header=args.csv_header)
    cfg = LloydConfig(max_iters=args.max_iters, tol=args.tol, seed=args.seed)
    result = best_of_kmeans(X, args.k, args.restarts, cfg, init=args.init)
    print(f"rows={X.shape[0]} cols={X.shape[1]} k={args.k} "
          f"restarts={args.restarts}")
    print(f"cost={result.cost!r} iterations={result.iterations} "
          f"converged={result.converged}")
    sizes = [int((result.labels == j).sum()) for j in range(args.k)]
    print("cluster sizes: " + " ".join(str(s) for s in sizes))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            for label in result.labels:
                fh.write(f"{int(label)}\n")
        print(f"labels written to {args.out}")
    return 0


def _cmd_inspect(args) -> int:
    spec = args.data
    if spec.startswith("edges:"):
        graph = load_edge_list(spec.split(":", 1)[1])
        degrees = [0] * graph.node_count
        for u, v in graph.edges:
            degrees[u] += 1
            degrees[v] += 1
        print(f"graph: nodes={graph.node_count} edges={len(graph.edges)}")
        if degrees:
            print(f"degree: min={min(degrees)} max={max(degrees)} "
                  f"mean={sum(degrees) / len(degrees):.3f}")
        return 0
    cfg = ExperimentConfig(dataset=spec, k=1, csv_has_header=bool(args.csv_header),
                           embed_dim=args.embed_dim)
    data = load_dataset(cfg)
    X = data.points
    print(f"dataset: {data.name} ({data.provenance})")
    print(f"rows={X.shape[0]} cols={X.shape[1]}")
    if X.size:
        print(f"value range: [{X.min():.6g}, {X.max():.6g}] mean={X.mean():.6g}")
    if data.labels is None:
        print("labels: none")
    else:
        print(f"labels: k={int(data.labels.max()) + 1}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "func", None) is None:
            parser.print_usage(sys.stderr)
            return 1
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (FormatError, DomainError, NumericalError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # argparse --help
        return int(exc.code) if exc.code else 0


if __name__ == "__main__":
    sys.exit(main())
