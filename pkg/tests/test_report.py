import csv
import io
import json
from dataclasses import replace
from pathlib import Path
from xml.etree import ElementTree

import jsonschema
import pytest

from measaudit.config import parse_config
from measaudit.errors import ReportError
from measaudit.pipeline import run_audit
from measaudit.report import PANEL_FILES, dumps, emit_panel_data, emit_report, format_float, loads
from measaudit.svg import figure_svg

SCHEMA = json.loads((Path(__file__).resolve().parents[1] / "docs" / "report_schema.json").read_text())
SVG = "{http://www.w3.org/2000/svg}"

CONFIG = """
[data]
path = {path}
target_column = T
metadata_columns = Date, Time
[realization.A]
features = AH, RH, PT08.S1(CO), PT08.S3(NOx)
[realization.B]
features = AH, RH, PT08.S2(NMHC), PT08.S4(NO2)
[output]
reproducible = true
"""


@pytest.fixture(scope="module")
def result(uci_like_path):
    return run_audit(parse_config(CONFIG.format(path=uci_like_path)))


def test_schema_and_round_trip(result):
    text = dumps(result)
    jsonschema.validate(json.loads(text), SCHEMA)
    back = loads(text)
    assert back == result
    assert dumps(back) == text


def test_floats_round_trip_exactly():
    for x in (0.1, 1 / 3, 2.0 ** -1074, 1e308, -0.0, 123456789.123456789):
        assert float(format_float(x)) == x
    with pytest.raises(ReportError):
        format_float(float("nan"))


def test_emit_to_sink(result):
    buf = io.StringIO()
    emit_report(result, buf)
    assert buf.getvalue() == dumps(result)


def test_unknown_pair_id_rejected(result):
    with pytest.raises(ReportError):
        replace(result, realizations=result.realizations[:1])


def test_panels(result, tmp_path):
    emit_panel_data(result, tmp_path)
    tables = {name: list(csv.DictReader(open(tmp_path / name))) for name in PANEL_FILES}
    assert len(tables["panel_a.csv"]) == 4
    for rid in ("A", "B"):
        assert sum(r["realization"] == rid for r in tables["panel_b.csv"]) == 9
        assert sum(r["realization"] == rid for r in tables["panel_c.csv"]) == 8
    n_test = result.provenance["n_test"]
    assert len(tables["panel_d.csv"]) == n_test
    # cross-check against the JSON report
    doc = json.loads(dumps(result))
    for row in tables["panel_a.csv"]:
        key = "mse_train" if row["split"] == "train" else "mse_test"
        assert float(row["mse"]) == doc[key][row["realization"]]
    assert [float(r["A-B"]) for r in tables["panel_d.csv"]] == doc["stability"]["pairs"][0]["disagreement"]


def test_svg_structure(result):
    root = ElementTree.fromstring(figure_svg(result).encode())
    groups = root.findall(f"{SVG}g")
    assert [g.get("id") for g in groups] == ["panel-a", "panel-b", "panel-c", "panel-d"]
    texts = {t.text for t in root.iter(f"{SVG}text")}
    for label in ("Nominal coverage", "Empirical coverage", "Input noise level", "True temperature (T)",
                  "Prediction difference (A - B)", "(d) Measurement stability"):
        assert label in texts
    points = groups[3].findall(f"{SVG}circle")
    assert len(points) == result.provenance["n_test"]


def test_svg_identical_realizations_on_zero_line(result):
    from measaudit.modeling import RealizationSpec, TrainedRealization
    from measaudit.stability import PairAudit, Verdict
    r = result.realizations[0]
    twin = TrainedRealization(RealizationSpec("A2", r.spec.feature_columns, "T"), r.standardizer, r.model,
                              r.residual_sigma)
    pair = result.stability.pairs[0]
    zeroed = PairAudit(replace(pair.stats, pair=("A", "A2")), Verdict(True), pair.row_indices, pair.y_true,
                       [0.0] * len(pair.y_true))
    res = replace(result, realizations=[r, twin], stability=replace(result.stability, pairs=[zeroed]))
    root = ElementTree.fromstring(figure_svg(res).encode())
    panel_d = root.findall(f"{SVG}g")[3]
    ys = {c.get("cy") for c in panel_d.findall(f"{SVG}circle")}
    zero_line = [p for p in panel_d.findall(f"{SVG}polyline")][-1].get("points").split()[0].split(",")[1]
    assert ys == {zero_line}
