"""Corruption-sweep benchmark harness.

An experiment fixes a dataset and k, fits a baseline clustering
(best of several seeded k-means++ runs), then sweeps label-corruption
rates: at each (rate, trial) cell a noisy predictor corrupts the baseline
labels and the predictor-seeded pipeline is scored against the baseline
cost, both without refinement ("seed-only", the corrupted labels used
as-is) and with Lloyd refinement ("refined").

Every cell's seed is derived from (master_seed, rate index, trial), so
results are reproducible and cells are independent: changing the trial
count never perturbs other cells.
"""

import dataclasses
import json
import time
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .datasets import LabeledDataset, load_cifar10, load_csv, load_edge_list, spectral_embed, synth_gmm
from .errors import ConfigError, DomainError
from .kmeans import LloydConfig, best_of_kmeans
from .pca import PcaPolicy
from .pipeline import PipelineConfig, SeedingMode, cost_ratio, predictor_clustering
from .predictors import NoisyPredictor
from .rng import derive_seed, make_rng

_SCHEMA_VERSION = 1
DEFAULT_RATES = tuple(round(0.1 * i, 1) for i in range(11))
VARIANT_SEED_ONLY = "seed-only"
VARIANT_REFINED = "refined"


@dataclass(frozen=True)
class ExperimentConfig:
    dataset: str
    k: int
    error_rates: tuple = DEFAULT_RATES
    trials: int = 5
    pca: PcaPolicy | None = None
    seeding: SeedingMode = field(default_factory=SeedingMode.coordinate_mean)
    lloyd: LloydConfig = field(default_factory=LloydConfig)
    variants: tuple = (VARIANT_SEED_ONLY, VARIANT_REFINED)
    baseline_restarts: int = 10
    master_seed: int = 0
    subsample: tuple | None = None
    csv_has_header: bool = False
    embed_dim: int = 2
    cifar_raw: bool = False

    def validate(self) -> None:
        if self.k < 1:
            raise ConfigError(f"k must be >= 1, got {self.k}")
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if self.baseline_restarts < 1:
            raise ConfigError(
                f"baseline_restarts must be >= 1, got {self.baseline_restarts}"
            )
        rates = list(self.error_rates)
        if any(not 0.0 <= r <= 1.0 for r in rates):
            raise ConfigError(f"error rates must lie in [0, 1], got {rates}")
        if rates != sorted(rates):
            raise ConfigError("error rates must be ascending")
        for v in self.variants:
            if v not in (VARIANT_SEED_ONLY, VARIANT_REFINED):
                raise ConfigError(f"unknown variant {v!r}")
        if not self.variants:
            raise ConfigError("at least one variant must be configured")
        if self.subsample is not None:
            count, _seed = self.subsample
            if count < 1:
                raise ConfigError(f"subsample count must be >= 1, got {count}")
        if self.embed_dim < 1:
            raise ConfigError(f"embed_dim must be >= 1, got {self.embed_dim}")
        _parse_dataset_spec(self.dataset)


@dataclass(frozen=True)
class CellResult:
    rate_index: int
    error_rate: float
    trial: int
    variant: str
    method_cost: float
    baseline_cost: float
    cost_ratio: float
    iterations: int
    reduced_dim: int | None
    wall_time: float
    lloyd_seconds: float


@dataclass(frozen=True)
class ExperimentResult:
    config: ExperimentConfig
    baseline_cost: float
    cells: tuple


_SYNTH_KEYS = {"k", "n", "dim", "sep", "sigma", "seed"}


def _parse_dataset_spec(spec: str):
    """Split a dataset spec string into (kind, payload).

    Forms: ``synth:k=..,n=..,dim=..,sep=..,sigma=..[,seed=..]``,
    ``csv:PATH``, ``cifar:PATH``, ``edges:PATH``; a bare path means CSV.
    """
    if ":" in spec:
        kind, payload = spec.split(":", 1)
    else:
        kind, payload = "csv", spec
    if kind == "synth":
        params = {}
        for item in payload.split(","):
            if "=" not in item:
                raise ConfigError(f"bad synth parameter {item!r} in {spec!r}")
            key, value = item.split("=", 1)
            if key not in _SYNTH_KEYS:
                raise ConfigError(f"unknown synth key {key!r} in {spec!r}")
            try:
                params[key] = float(value) if key in ("sep", "sigma") else int(value)
            except ValueError:
                raise ConfigError(f"bad synth value {item!r} in {spec!r}") from None
        missing = {"k", "n", "dim", "sep", "sigma"} - set(params)
        if missing:
            raise ConfigError(f"synth spec missing {sorted(missing)} in {spec!r}")
        return kind, params
    if kind in ("csv", "cifar", "edges"):
        if not payload:
            raise ConfigError(f"dataset spec {spec!r} is missing a path")
        return kind, payload
    raise ConfigError(f"unknown dataset kind {kind!r} in {spec!r}")


def load_dataset(cfg: ExperimentConfig) -> LabeledDataset:
    """Materialize the configured dataset, applying any subsampling."""
    kind, payload = _parse_dataset_spec(cfg.dataset)
    if kind == "synth":
        seed = payload.get("seed", derive_seed(cfg.master_seed, 2))
        data = synth_gmm(
            k=payload["k"],
            n_per=payload["n"],
            dim=payload["dim"],
            separation=payload["sep"],
            sigma=payload["sigma"],
            seed=seed,
        )
    elif kind == "csv":
        points = load_csv(payload, has_header=cfg.csv_has_header)
        data = LabeledDataset(points=points, labels=None, name="csv",
                              provenance=str(payload))
    elif kind == "cifar":
        data = load_cifar10(payload, scale=not cfg.cifar_raw)
    else:
        graph = load_edge_list(payload)
        points = spectral_embed(graph, cfg.embed_dim)
        data = LabeledDataset(points=points, labels=None, name="edges",
                              provenance=str(payload))

    if cfg.subsample is not None:
        count, seed = cfg.subsample
        n = data.points.shape[0]
        if count > n:
            raise ConfigError(f"subsample count {count} exceeds {n} rows")
        idx = np.sort(make_rng(seed).choice(n, size=count, replace=False))
        data = LabeledDataset(
            points=data.points[idx].copy(),
            labels=None if data.labels is None else data.labels[idx].copy(),
            name=data.name,
            provenance=f"{data.provenance} [subsample {count} seed {seed}]",
        )
    return data


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    """Execute the full (rate, trial, variant) grid for one configuration."""
    cfg.validate()
    data = load_dataset(cfg)
    X = data.points
    n = X.shape[0]
    if cfg.k > n:
        raise ConfigError(f"k={cfg.k} exceeds dataset size {n}")

    baseline_cfg = dataclasses.replace(cfg.lloyd, seed=derive_seed(cfg.master_seed, 0))
    baseline = best_of_kmeans(X, cfg.k, cfg.baseline_restarts, baseline_cfg)
    if baseline.cost <= 0.0:
        raise ConfigError("baseline cost is zero; cost ratios are undefined")

    cells = []
    for rate_index, rate in enumerate(cfg.error_rates):
        for trial in range(cfg.trials):
            cell_seed = derive_seed(cfg.master_seed, 1, rate_index, trial)
            predictor = NoisyPredictor(
                base_labels=baseline.labels,
                error_rate=float(rate),
                k=cfg.k,
                seed=cell_seed,
            )
            for variant in cfg.variants:
                pipe_cfg = PipelineConfig(
                    k=cfg.k,
                    pca=cfg.pca,
                    seeding=cfg.seeding,
                    lloyd=cfg.lloyd,
                    refine=(variant == VARIANT_REFINED),
                )
                started = time.perf_counter()
                outcome = predictor_clustering(X, predictor, pipe_cfg)
                wall = time.perf_counter() - started
                method_cost = outcome.result.cost
                cells.append(
                    CellResult(
                        rate_index=rate_index,
                        error_rate=float(rate),
                        trial=trial,
                        variant=variant,
                        method_cost=method_cost,
                        baseline_cost=baseline.cost,
                        cost_ratio=cost_ratio(method_cost, baseline.cost),
                        iterations=outcome.iterations,
                        reduced_dim=outcome.reduced_dim,
                        wall_time=wall,
                        lloyd_seconds=outcome.lloyd_seconds,
                    )
                )
    return ExperimentResult(config=cfg, baseline_cost=baseline.cost,
                            cells=tuple(cells))


CSV_COLUMNS = (
    "rate_index",
    "error_rate",
    "trial",
    "variant",
    "method_cost",
    "baseline_cost",
    "cost_ratio",
    "iterations",
    "reduced_dim",
    "wall_time",
    "lloyd_seconds",
)

# Timing columns are machine noise; determinism guarantees exclude them.
TIMING_COLUMNS = ("wall_time", "lloyd_seconds")


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def config_to_dict(cfg: ExperimentConfig) -> dict:
    pca = None
    if cfg.pca is not None:
        pca = {"fixed_dim": cfg.pca.fixed_dim, "evr_threshold": cfg.pca.evr_threshold}
    return {
        "dataset": cfg.dataset,
        "k": cfg.k,
        "error_rates": [float(r) for r in cfg.error_rates],
        "trials": cfg.trials,
        "pca": pca,
        "seeding": {"trim_alpha": cfg.seeding.trim_alpha},
        "lloyd": {
            "max_iters": cfg.lloyd.max_iters,
            "tol": cfg.lloyd.tol,
            "seed": cfg.lloyd.seed,
        },
        "variants": list(cfg.variants),
        "baseline_restarts": cfg.baseline_restarts,
        "master_seed": cfg.master_seed,
        "subsample": None if cfg.subsample is None else list(cfg.subsample),
        "csv_has_header": cfg.csv_has_header,
        "embed_dim": cfg.embed_dim,
        "cifar_raw": cfg.cifar_raw,
    }


def config_from_dict(doc: dict) -> ExperimentConfig:
    pca = None
    if doc.get("pca") is not None:
        pca = PcaPolicy(
            fixed_dim=doc["pca"]["fixed_dim"],
            evr_threshold=doc["pca"]["evr_threshold"],
        )
    return ExperimentConfig(
        dataset=doc["dataset"],
        k=doc["k"],
        error_rates=tuple(doc["error_rates"]),
        trials=doc["trials"],
        pca=pca,
        seeding=SeedingMode(trim_alpha=doc["seeding"]["trim_alpha"]),
        lloyd=LloydConfig(
            max_iters=doc["lloyd"]["max_iters"],
            tol=doc["lloyd"]["tol"],
            seed=doc["lloyd"]["seed"],
        ),
        variants=tuple(doc["variants"]),
        baseline_restarts=doc["baseline_restarts"],
        master_seed=doc["master_seed"],
        subsample=None if doc["subsample"] is None else tuple(doc["subsample"]),
        csv_has_header=doc["csv_has_header"],
        embed_dim=doc["embed_dim"],
        cifar_raw=doc["cifar_raw"],
    )


def result_to_dict(result: ExperimentResult) -> dict:
    return {
        "schema_version": _SCHEMA_VERSION,
        "library_version": __version__,
        "config": config_to_dict(result.config),
        "baseline_cost": result.baseline_cost,
        "cells": [dataclasses.asdict(cell) for cell in result.cells],
    }


def result_from_dict(doc: dict) -> ExperimentResult:
    if doc.get("schema_version") != _SCHEMA_VERSION:
        raise DomainError(f"unsupported schema_version {doc.get('schema_version')}")
    cells = tuple(
        CellResult(
            rate_index=c["rate_index"],
            error_rate=c["error_rate"],
            trial=c["trial"],
            variant=c["variant"],
            method_cost=c["method_cost"],
            baseline_cost=c["baseline_cost"],
            cost_ratio=c["cost_ratio"],
            iterations=c["iterations"],
            reduced_dim=c["reduced_dim"],
            wall_time=c["wall_time"],
            lloyd_seconds=c["lloyd_seconds"],
        )
        for c in doc["cells"]
    )
    return ExperimentResult(
        config=config_from_dict(doc["config"]),
        baseline_cost=doc["baseline_cost"],
        cells=cells,
    )


def results_to_csv_text(result: ExperimentResult) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for cell in result.cells:
        record = dataclasses.asdict(cell)
        lines.append(",".join(_fmt(record[col]) for col in CSV_COLUMNS))
    return "\n".join(lines) + "\n"


def results_to_json_text(result: ExperimentResult) -> str:
    return json.dumps(result_to_dict(result), indent=2, sort_keys=True) + "\n"


def emit_results(result: ExperimentResult, format: str, path) -> None:
    """Write results as CSV (one row per rate/trial/variant cell) or JSON."""
    if format == "csv":
        text = results_to_csv_text(result)
    elif format == "json":
        text = results_to_json_text(result)
    else:
        raise ConfigError(f"unknown output format {format!r}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def load_results_json(path) -> ExperimentResult:
    with open(path, "r", encoding="utf-8") as fh:
        return result_from_dict(json.load(fh))
