"""Audit result container, JSON report, and per-panel CSV exports.

Floats are written with 17 significant digits so every value round-trips
bit-exactly; keys keep a fixed order so reports diff cleanly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

from .errors import ReportError
from .metrics import EvaluationReport
from .modeling import TrainedRealization
from .stability import (
    ContrastSummary,
    DisagreementReport,
    PairAudit,
    StabilityReport,
    StabilityThresholds,
    Verdict,
)

SCHEMA_VERSION = 1
PANEL_FILES = ("panel_a.csv", "panel_b.csv", "panel_c.csv", "panel_d.csv")


@dataclass
class AuditResult:
    config: dict
    realizations: list[TrainedRealization]
    evaluations: list[EvaluationReport]
    stability: StabilityReport
    contrast: ContrastSummary
    provenance: dict

    def __post_init__(self):
        ids = {r.id for r in self.realizations}
        for p in self.stability.pairs:
            missing = set(p.stats.pair) - ids
            if missing:
                raise ReportError(f"stability pair references unknown realization(s) {sorted(missing)}")
        if not self.provenance.get("dataset_sha256"):
            raise ReportError("provenance lacks a dataset hash")

    @property
    def stable(self) -> bool:
        return self.stability.stable

    def evaluation(self, rid: str) -> EvaluationReport:
        return next(e for e in self.evaluations if e.realization_id == rid)

    def target_column(self) -> str:
        return self.realizations[0].spec.target_column

    def to_dict(self) -> dict:
        th = self.stability.thresholds
        return {
            "schema_version": SCHEMA_VERSION,
            "provenance": dict(self.provenance),
            "config": self.config,
            "verdict": "stable" if self.stable else "unstable",
            "mse_train": {e.realization_id: e.mse_train for e in self.evaluations},
            "mse_test": {e.realization_id: e.mse_test for e in self.evaluations},
            "realizations": [
                {"model": r.to_dict(), "evaluation": self.evaluation(r.id).to_dict()}
                for r in self.realizations
            ],
            "stability": {
                "thresholds": {
                    "max_abs_relative_mean": th.max_abs_relative_mean,
                    "max_abs_pearson_r": th.max_abs_pearson_r,
                    "equivalence_scale": th.equivalence_scale,
                },
                "overall": "stable" if self.stable else "unstable",
                "pairs": [
                    p.stats.to_dict() | {
                        "verdict": {"stable": p.verdict.stable, "reasons": list(p.verdict.reasons)},
                        "row_indices": list(p.row_indices),
                        "y_true": list(p.y_true),
                        "disagreement": list(p.disagreement),
                    }
                    for p in self.stability.pairs
                ],
            },
            "contrast": self.contrast.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "AuditResult":
        if d.get("schema_version") != SCHEMA_VERSION:
            raise ReportError(f"unsupported schema_version {d.get('schema_version')!r}")
        realizations = [TrainedRealization.from_dict(r["model"]) for r in d["realizations"]]
        evaluations = [EvaluationReport.from_dict(r["evaluation"]) for r in d["realizations"]]
        st = d["stability"]
        thresholds = StabilityThresholds(**st["thresholds"])
        pairs = [
            PairAudit(
                DisagreementReport.from_dict(p),
                Verdict(p["verdict"]["stable"], tuple(p["verdict"]["reasons"])),
                list(p["row_indices"]), list(p["y_true"]), list(p["disagreement"]),
            )
            for p in st["pairs"]
        ]
        stability = StabilityReport(thresholds, pairs)
        c = d["contrast"]
        contrast = ContrastSummary(
            {e.realization_id: e.robustness for e in sorted(evaluations, key=lambda e: e.realization_id)},
            dict(c["robust"]),
            stability.verdicts,
            c["all_robust"], c["stable"], c["robust_but_unstable"],
        )
        return cls(d["config"], realizations, evaluations, stability, contrast, dict(d["provenance"]))


def format_float(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ReportError(f"non-finite number {x!r} cannot be serialized")
    return "%.17g" % x


def _scalar(v) -> str:
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return format_float(v)
    if isinstance(v, str):
        return json.dumps(v)
    raise ReportError(f"cannot serialize {type(v).__name__}")


def _encode(obj, depth: int) -> str:
    pad = "  " * (depth + 1)
    end = "  " * depth
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, depth + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(_scalar(v) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + _encode(v, depth + 1) for v in obj) + "\n" + end + "]"
    return _scalar(obj)


def dumps(result: AuditResult) -> str:
    return _encode(result.to_dict(), 0) + "\n"


def loads(text: str) -> AuditResult:
    return AuditResult.from_dict(json.loads(text))


def emit_report(result: AuditResult, destination) -> None:
    text = dumps(result)
    if hasattr(destination, "write"):
        destination.write(text)
        return
    try:
        Path(destination).write_text(text)
    except OSError as exc:
        raise ReportError(f"cannot write report: {exc}") from None


def read_report(path) -> AuditResult:
    try:
        return loads(Path(path).read_text())
    except OSError as exc:
        raise ReportError(f"cannot read report: {exc}") from None
    except (KeyError, TypeError, ValueError) as exc:
        raise ReportError(f"malformed report: {exc}") from None


def _csv(rows) -> str:
    out = []
    for row in rows:
        cells = []
        for v in row:
            if isinstance(v, float):
                cells.append(format_float(v))
            else:
                s = str(v)
                cells.append('"' + s.replace('"', '""') + '"' if any(c in s for c in ',"\n') else s)
        out.append(",".join(cells))
    return "\n".join(out) + "\n"


def panel_tables(result: AuditResult) -> dict[str, str]:
    """Text of the four panel CSVs, keyed by file name."""
    a = [("realization", "split", "mse")]
    b = [("realization", "level", "coverage")]
    c = [("realization", "noise_level", "mse")]
    for e in result.evaluations:
        a.append((e.realization_id, "train", e.mse_train))
        a.append((e.realization_id, "test", e.mse_test))
        b.extend((e.realization_id, lv, cv) for lv, cv in zip(e.calibration.levels, e.calibration.coverage))
        c.extend((e.realization_id, s, m) for s, m in zip(e.robustness.noise_levels, e.robustness.mse))
    pairs = result.stability.pairs
    d = [("row_index", "y_true") + tuple(f"{p.stats.pair[0]}-{p.stats.pair[1]}" for p in pairs)]
    if pairs:
        first = pairs[0]
        for i, (row, y) in enumerate(zip(first.row_indices, first.y_true)):
            d.append((row, y) + tuple(p.disagreement[i] for p in pairs))
    return dict(zip(PANEL_FILES, (_csv(a), _csv(b), _csv(c), _csv(d))))


def emit_panel_data(result: AuditResult, directory) -> None:
    directory = Path(directory)
    try:
        directory.mkdir(parents=True, exist_ok=True)
        for name, text in panel_tables(result).items():
            (directory / name).write_text(text)
    except OSError as exc:
        raise ReportError(f"cannot write panel data: {exc}") from None
