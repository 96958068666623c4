import pathlib
import xml.etree.ElementTree as ET

import numpy as np
import pytest
from click.testing import CliRunner

from gaitscope import synthetic
from gaitscope.annotations import emit_annotations, parse_annotations
from gaitscope.cli import main
from gaitscope.errors import DegenerateConfiguration
from gaitscope.fixtures import (
    feature_table_from_csv,
    feature_table_to_csv,
    load_feature_fixture,
    load_synthetic_document,
    load_synthetic_truth,
)
from gaitscope.gait import Outcome
from gaitscope.geometry import LanePair, Point2
from gaitscope.pipeline import (
    predictions_csv,
    rectified_tracks,
    roc_svg,
    run_classify,
    run_extract,
)

SVG_NS = "{http://www.w3.org/2000/svg}"


class TestFeatureFixture:
    def test_row_count_and_outcome_balance(self):
        table = load_feature_fixture()
        assert len(table.rows) == 14
        falls = sum(r.outcome is Outcome.FALL for r in table.rows)
        assert falls == 6 and len(table.rows) - falls == 8

    @pytest.mark.parametrize(
        "person_id,stride,head,outcome",
        [
            (1, 85.2, 7.6, Outcome.FALL),
            (5, 36.2, 2.1, Outcome.FALL),
            (7, 130.2, 7.1, Outcome.NO_FALL),
            (12, 101.1, 1.7, Outcome.FALL),
        ],
    )
    def test_published_rows(self, person_id, stride, head, outcome):
        row = next(
            r for r in load_feature_fixture().rows
            if r.person_id == person_id
        )
        assert row.stride_length == stride
        assert row.head_range == head
        assert row.outcome is outcome

    def test_single_step_people_have_one_stride(self):
        table = load_feature_fixture()
        counts = {r.person_id: r.stride_count for r in table.rows}
        assert counts[2] == counts[5] == counts[7] == 1
        assert counts[6] == 4

    def test_csv_round_trip(self):
        table = load_feature_fixture()
        assert feature_table_from_csv(feature_table_to_csv(table)) == table

    def test_csv_header(self):
        text = feature_table_to_csv(load_feature_fixture())
        assert text.splitlines()[0] == "personId,L,H,outcome,strideCount"


class TestRunExtract:
    def test_synthetic_document_matches_truth(self):
        doc = load_synthetic_document()
        truth = load_synthetic_truth()
        result = run_extract(doc)
        assert result.skipped == ()
        assert len(result.table.rows) == 4
        for row in result.table.rows:
            expected = truth[row.person_id]
            assert row.stride_length == pytest.approx(
                expected["expectedStridePixels"], abs=0.1
            )
            assert row.head_range == pytest.approx(
                expected["expectedHeadRange"], abs=0.35
            )

    def test_order_independent(self):
        doc = load_synthetic_document()
        reordered = type(doc)(
            doc.video_id, doc.frame_rate, doc.lane_calibration,
            tuple(reversed(doc.sequences)),
        )
        assert run_extract(doc).table == run_extract(reordered).table

    def test_degenerate_lanes_fail_before_people(self):
        doc = load_synthetic_document()
        line = (Point2(0, 0), Point2(0, 10))
        bad = type(doc)(
            doc.video_id, doc.frame_rate, LanePair(line, line),
            doc.sequences,
        )
        with pytest.raises(DegenerateConfiguration):
            run_extract(bad)

    def test_empty_sequences_empty_table(self):
        doc = load_synthetic_document()
        empty = type(doc)(
            doc.video_id, doc.frame_rate, doc.lane_calibration, ()
        )
        result = run_extract(empty)
        assert result.table.rows == ()

    def test_metadata_only_sequence_skipped(self):
        doc = load_synthetic_document()
        seq = doc.sequences[0]
        stripped = type(seq)(
            seq.person_id, seq.start_frame, seq.end_frame,
            seq.obstacle_frame, seq.direction, seq.outcome, (),
        )
        patched = type(doc)(
            doc.video_id, doc.frame_rate, doc.lane_calibration,
            (stripped,) + doc.sequences[1:],
        )
        result = run_extract(patched)
        assert [p for p, _ in result.skipped] == [seq.person_id]
        assert len(result.table.rows) == 3


class TestRocSvg:
    def test_structure_and_auc_label(self):
        report = run_classify(load_feature_fixture(), "svm")
        root = ET.fromstring(roc_svg(report))
        assert root.tag == f"{SVG_NS}svg"
        classes = [el.get("class") for el in root]
        assert classes[:4] == ["axes", "chance", "roc", "auc-label"]
        polyline = root.find(f"{SVG_NS}polyline")
        n_pts = len(polyline.get("points").split())
        assert n_pts == len(report.roc_points)
        label = root.find(f"{SVG_NS}text")
        assert f"{report.auc:.3f}" in label.text

    def test_chance_line_is_diagonal(self):
        report = run_classify(load_feature_fixture(), "knn")
        root = ET.fromstring(roc_svg(report))
        line = root.find(f"{SVG_NS}line")
        x0, y0 = float(line.get("x1")), float(line.get("y1"))
        x1, y1 = float(line.get("x2")), float(line.get("y2"))
        assert (y0 - y1) == pytest.approx(x1 - x0)  # slope 1 in TPR space


class TestRectifiedTracks:
    def test_csv_shapes(self):
        footfalls, heads = rectified_tracks(load_synthetic_document())
        foot_lines = footfalls.strip().splitlines()
        head_lines = heads.strip().splitlines()
        assert foot_lines[0] == "personId,stanceIndex,foot,firstFrame,lastFrame,x,y"
        assert head_lines[0] == "personId,frame,vertical"
        assert len(foot_lines) > 3 and len(head_lines) > 10


class TestCli:
    def run(self, *args, **kwargs):
        return CliRunner().invoke(main, list(args), **kwargs)

    def test_classify_fixture_svm(self):
        result = self.run("classify", "--fixture", "--method", "svm")
        assert result.exit_code == 0
        assert "accuracy: 11/14" in result.output
        assert "misclassified: 1, 4, 11" in result.output
        assert "AUC: 0.771" in result.output

    def test_classify_fixture_knn_writes_report(self, tmp_path):
        out = tmp_path / "report"
        result = self.run(
            "classify", "--fixture", "--method", "knn", "--out", str(out)
        )
        assert result.exit_code == 0
        assert (out / "roc.svg").exists()
        predictions = (out / "predictions.csv").read_text()
        assert predictions.splitlines()[0] == (
            "personId,trueLabel,predictedLabel,score"
        )
        assert len(predictions.strip().splitlines()) == 15

    def test_classify_requires_source(self):
        result = self.run("classify", "--method", "svm")
        assert result.exit_code != 0

    def test_classify_single_class_csv_exits_nonzero(self, tmp_path):
        csv_path = tmp_path / "features.csv"
        csv_path.write_text(
            "personId,L,H,outcome,strideCount\n"
            "1,80.0,5.0,Fall,2\n2,90.0,6.0,Fall,2\n3,85.0,5.5,Fall,2\n"
        )
        result = self.run("classify", str(csv_path))
        assert result.exit_code == 3

    def test_extract_then_classify(self, tmp_path):
        doc_path = tmp_path / "doc.json"
        doc_path.write_text(
            emit_annotations(load_synthetic_document())
        )
        features = tmp_path / "features.csv"
        result = self.run("extract", str(doc_path), "--out", str(features))
        assert result.exit_code == 0
        table = feature_table_from_csv(features.read_text())
        assert len(table.rows) == 4
        for method in ("svm", "knn"):
            result = self.run("classify", str(features), "--method", method)
            assert result.exit_code == 0

    def test_extract_parse_error_exit_code(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        result = self.run("extract", str(bad), "--out",
                          str(tmp_path / "f.csv"))
        assert result.exit_code == 2

    def test_rectify(self, tmp_path):
        doc_path = tmp_path / "doc.json"
        doc_path.write_text(emit_annotations(load_synthetic_document()))
        out = tmp_path / "tracks"
        result = self.run("rectify", str(doc_path), "--out", str(out))
        assert result.exit_code == 0
        assert (out / "footfalls.csv").exists()
        assert (out / "head_tracks.csv").exists()

    def test_report_summary(self):
        result = self.run("report")
        assert result.exit_code == 0
        assert "svm (none)" in result.output
        assert "knn (zscore)" in result.output
