"""End-to-end audit: ingest, split, train, evaluate, compare."""

from __future__ import annotations

import hashlib
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .config import AuditConfig
from .errors import FewerThanTwoRealizations, IngestError
from .ingest import clean, parse_table
from .metrics import evaluate_realization
from .modeling import train_realization
from .report import AuditResult, dumps, panel_tables
from .rng import RngStream
from .split import temporal_split
from .stability import robustness_vs_stability_contrast, stability_audit
from .svg import figure_svg

EXIT_STABLE = 0
EXIT_ERROR = 1
EXIT_UNSTABLE = 10


def run_audit(config: AuditConfig, data: bytes | None = None) -> AuditResult:
    if len(config.realizations) < 2:
        raise FewerThanTwoRealizations("an audit needs at least two realizations")
    if data is None:
        try:
            data = config.data_path().read_bytes()
        except OSError as exc:
            raise IngestError(f"cannot read data file: {exc}") from None
    fmt = config.data.table_format
    dataset = clean(parse_table(data, fmt), fmt)
    split = temporal_split(dataset, config.split)

    rng = RngStream(config.master_seed)
    trained = sorted((train_realization(split, spec) for spec in config.realizations), key=lambda r: r.id)
    evaluations = [
        evaluate_realization(r, split, config.calibration_levels, config.noise_levels, rng)
        for r in trained
    ]
    stability = stability_audit(trained, split, config.thresholds)
    contrast = robustness_vs_stability_contrast(
        trained, split, config.noise_levels, config.thresholds, rng, config.robustness,
        curves={e.realization_id: e.robustness for e in evaluations}, stability=stability,
    )
    if config.output.reproducible:
        timestamp = config.output.timestamp
    else:
        timestamp = datetime.now(timezone.utc).replace(microsecond=0).isoformat().replace("+00:00", "Z")
    provenance = {
        "tool_version": __version__,
        "master_seed": config.master_seed,
        "dataset_sha256": hashlib.sha256(data).hexdigest(),
        "n_rows_clean": dataset.n_rows,
        "n_train": split.train.n_rows,
        "n_test": split.test.n_rows,
        "timestamp": timestamp,
    }
    return AuditResult(config.to_dict(), trained, evaluations, stability, contrast, provenance)


def exit_status(result: AuditResult) -> int:
    return EXIT_STABLE if result.stable else EXIT_UNSTABLE


def write_outputs(result: AuditResult, directory, emit_figure: bool = True) -> dict[str, Path]:
    """Render everything in memory first so a failure never leaves a partial report."""
    files = {"report.json": dumps(result), **panel_tables(result)}
    if emit_figure:
        files["figure.svg"] = figure_svg(result)
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = {}
    for name, text in files.items():
        path = directory / name
        path.write_text(text)
        written[name] = path
    return written
