"""Audit configuration: an INI document with strictly checked keys.

Example::

    [data]
    path = AirQualityUCI.csv
    target_column = T

    [realization.A]
    features = AH, RH, PT08.S1(CO), PT08.S3(NOx)

    [realization.B]
    features = AH, RH, PT08.S2(NMHC), PT08.S4(NO2)

Everything else falls back to the defaults below.  Vectors accept either a
comma-separated list or ``linspace(start, stop, count)``.
"""

from __future__ import annotations

import configparser
import re
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .errors import InvalidValue, MissingRequired, UnknownKey
from .ingest import TableFormat
from .metrics import DEFAULT_LEVELS, DEFAULT_NOISE_LEVELS
from .modeling import RealizationSpec
from .split import SplitSpec
from .stability import RobustnessCriteria, StabilityThresholds

DEFAULT_TIMESTAMP = "1970-01-01T00:00:00Z"
_LINSPACE = re.compile(r"^linspace\(\s*([^,]+),\s*([^,]+),\s*(\d+)\s*\)$")

_KEYS = {
    "data": {"path", "field_separator", "decimal_separator", "drop_unnamed_trailing",
             "sentinel_missing", "target_column", "metadata_columns"},
    "split": {"train_frac", "gap_frac"},
    "evaluation": {"calibration_levels", "noise_levels", "master_seed"},
    "thresholds": {"max_abs_relative_mean", "max_abs_pearson_r", "equivalence_scale"},
    "robustness": {"monotone_tolerance", "degradation_tolerance", "comparable_ratio"},
    "output": {"directory", "emit_figure", "reproducible", "timestamp"},
}
_REALIZATION_KEYS = {"features"}


@dataclass(frozen=True)
class DataConfig:
    path: str
    target_column: str
    table_format: TableFormat = TableFormat()
    metadata_columns: tuple[str, ...] = ()


@dataclass(frozen=True)
class OutputConfig:
    directory: str = "audit_out"
    emit_figure: bool = True
    reproducible: bool = False
    timestamp: str = DEFAULT_TIMESTAMP


@dataclass(frozen=True)
class AuditConfig:
    data: DataConfig
    realizations: tuple[RealizationSpec, ...]
    split: SplitSpec = SplitSpec()
    calibration_levels: tuple[float, ...] = DEFAULT_LEVELS
    noise_levels: tuple[float, ...] = DEFAULT_NOISE_LEVELS
    master_seed: int = 0
    thresholds: StabilityThresholds = StabilityThresholds()
    robustness: RobustnessCriteria = RobustnessCriteria()
    output: OutputConfig = OutputConfig()
    base_dir: Path = field(default=Path("."), compare=False)

    def data_path(self) -> Path:
        p = Path(self.data.path)
        return p if p.is_absolute() else self.base_dir / p

    def with_overrides(self, out=None, seed=None, reproducible=None) -> "AuditConfig":
        cfg = self
        if seed is not None:
            cfg = replace(cfg, master_seed=int(seed))
        if out is not None:
            cfg = replace(cfg, output=replace(cfg.output, directory=str(out)))
        if reproducible:
            cfg = replace(cfg, output=replace(cfg.output, reproducible=True))
        return cfg

    def to_dict(self) -> dict:
        fmt = self.data.table_format
        return {
            "data": {
                "path": self.data.path,
                "field_separator": fmt.field_separator,
                "decimal_separator": fmt.decimal_separator,
                "drop_unnamed_trailing": fmt.drop_unnamed_trailing,
                "sentinel_missing": fmt.sentinel_missing,
                "target_column": self.data.target_column,
                "metadata_columns": list(self.data.metadata_columns),
            },
            "split": {"train_frac": self.split.train_frac, "gap_frac": self.split.gap_frac},
            "realizations": [{"id": r.id, "features": list(r.feature_columns)} for r in self.realizations],
            "evaluation": {
                "calibration_levels": list(self.calibration_levels),
                "noise_levels": list(self.noise_levels),
                "master_seed": self.master_seed,
            },
            "thresholds": {
                "max_abs_relative_mean": self.thresholds.max_abs_relative_mean,
                "max_abs_pearson_r": self.thresholds.max_abs_pearson_r,
                "equivalence_scale": self.thresholds.equivalence_scale,
            },
            "robustness": {
                "monotone_tolerance": self.robustness.monotone_tolerance,
                "degradation_tolerance": self.robustness.degradation_tolerance,
                "comparable_ratio": self.robustness.comparable_ratio,
            },
            "output": {
                "directory": self.output.directory,
                "emit_figure": self.output.emit_figure,
                "reproducible": self.output.reproducible,
                "timestamp": self.output.timestamp,
            },
        }


def _unquote(text: str) -> str:
    text = text.strip()
    if len(text) >= 2 and text[0] == text[-1] and text[0] in "'\"":
        return text[1:-1]
    return text


def _float(section, key, raw) -> float:
    try:
        return float(_unquote(raw))
    except ValueError:
        raise InvalidValue(f"{section}.{key}: not a number: {raw!r}") from None


def _int(section, key, raw) -> int:
    try:
        return int(_unquote(raw))
    except ValueError:
        raise InvalidValue(f"{section}.{key}: not an integer: {raw!r}") from None


def _bool(section, key, raw) -> bool:
    v = _unquote(raw).lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise InvalidValue(f"{section}.{key}: not a boolean: {raw!r}")


def _names(raw) -> tuple[str, ...]:
    return tuple(n.strip() for n in _unquote(raw).split(",") if n.strip())


def _vector(section, key, raw) -> tuple[float, ...]:
    text = _unquote(raw)
    m = _LINSPACE.match(text)
    try:
        if m:
            return tuple(float(v) for v in np.linspace(float(m[1]), float(m[2]), int(m[3])))
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise InvalidValue(f"{section}.{key}: not a numeric vector: {raw!r}") from None


def parse_config(document: str, base_dir=".") -> AuditConfig:
    parser = configparser.ConfigParser(interpolation=None, default_section="__unused__")
    parser.optionxform = str
    try:
        parser.read_string(document)
    except configparser.Error as exc:
        raise InvalidValue(f"malformed configuration: {exc}") from None

    realization_sections = []
    for section in parser.sections():
        if section.startswith("realization."):
            keys = _REALIZATION_KEYS
            realization_sections.append(section)
        elif section in _KEYS:
            keys = _KEYS[section]
        else:
            raise UnknownKey(f"unknown section {section!r}")
        for key in parser[section]:
            if key not in keys:
                raise UnknownKey(f"unknown key {section}.{key}")

    def get(section, key):
        return parser[section][key] if parser.has_option(section, key) else None

    path = get("data", "path")
    target = get("data", "target_column")
    if path is None or not _unquote(path):
        raise MissingRequired("data.path is required")
    if target is None or not _unquote(target):
        raise MissingRequired("data.target_column is required")
    target = _unquote(target)

    fmt_kwargs = {}
    for key in ("field_separator", "decimal_separator"):
        if (raw := get("data", key)) is not None:
            fmt_kwargs[key] = _unquote(raw)
    if (raw := get("data", "drop_unnamed_trailing")) is not None:
        fmt_kwargs["drop_unnamed_trailing"] = _bool("data", "drop_unnamed_trailing", raw)
    if (raw := get("data", "sentinel_missing")) is not None:
        fmt_kwargs["sentinel_missing"] = _float("data", "sentinel_missing", raw)
    try:
        fmt = TableFormat(**fmt_kwargs)
    except Exception as exc:
        raise InvalidValue(f"data: {exc}") from None
    metadata = _names(get("data", "metadata_columns") or "")
    data = DataConfig(_unquote(path), target, fmt, metadata)

    realizations = []
    for section in realization_sections:
        rid = section[len("realization."):]
        features = _names(get(section, "features") or "")
        if not rid or not features:
            raise MissingRequired(f"{section}.features is required")
        bad = [f for f in features if f in metadata]
        if bad:
            raise InvalidValue(f"{section}.features: metadata columns cannot be features: {bad}")
        try:
            realizations.append(RealizationSpec(rid, features, target))
        except Exception as exc:
            raise InvalidValue(f"{section}: {exc}") from None
    if not realizations:
        raise MissingRequired("at least one [realization.<id>] section is required")

    kwargs = {}
    split_kwargs = {k: _float("split", k, get("split", k)) for k in _KEYS["split"] if get("split", k) is not None}
    try:
        kwargs["split"] = SplitSpec(**split_kwargs)
    except Exception as exc:
        raise InvalidValue(f"split: {exc}") from None

    for key in ("calibration_levels", "noise_levels"):
        if (raw := get("evaluation", key)) is not None:
            vec = _vector("evaluation", key, raw)
            if not vec:
                raise InvalidValue(f"evaluation.{key}: empty vector")
            if key == "calibration_levels" and (
                any(not 0 < v < 1 for v in vec) or any(b <= a for a, b in zip(vec, vec[1:]))
            ):
                raise InvalidValue("evaluation.calibration_levels: need strictly increasing values in (0, 1)")
            if key == "noise_levels" and (
                any(v < 0 for v in vec) or any(b < a for a, b in zip(vec, vec[1:]))
            ):
                raise InvalidValue("evaluation.noise_levels: need non-decreasing values >= 0")
            kwargs[key] = vec
    if (raw := get("evaluation", "master_seed")) is not None:
        kwargs["master_seed"] = _int("evaluation", "master_seed", raw)

    th = {}
    for key in ("max_abs_relative_mean", "max_abs_pearson_r"):
        if (raw := get("thresholds", key)) is not None:
            th[key] = _float("thresholds", key, raw)
    if (raw := get("thresholds", "equivalence_scale")) is not None:
        th["equivalence_scale"] = _unquote(raw)
    try:
        kwargs["thresholds"] = StabilityThresholds(**th)
    except (ValueError, NotImplementedError) as exc:
        raise InvalidValue(f"thresholds: {exc}") from None

    rc = {k: _float("robustness", k, get("robustness", k))
          for k in _KEYS["robustness"] if get("robustness", k) is not None}
    kwargs["robustness"] = RobustnessCriteria(**rc)

    out = {}
    if (raw := get("output", "directory")) is not None:
        out["directory"] = _unquote(raw)
    for key in ("emit_figure", "reproducible"):
        if (raw := get("output", key)) is not None:
            out[key] = _bool("output", key, raw)
    if (raw := get("output", "timestamp")) is not None:
        out["timestamp"] = _unquote(raw)
    kwargs["output"] = OutputConfig(**out)

    return AuditConfig(data, tuple(realizations), base_dir=Path(base_dir), **kwargs)


def load_config(path) -> AuditConfig:
    path = Path(path)
    return parse_config(path.read_text(), base_dir=path.parent)
