import datetime as dt
import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gui_verify import __version__, errors
from gui_verify.config import Config
from gui_verify.model import BoundingBox, ScreenImage
from gui_verify.report import (
    FAMILY_COLORS,
    ViolationReport,
    annotate_image,
    current_timestamp,
    from_json,
    render_html,
    to_json,
)
from gui_verify.violations import CATEGORY_METRICS, Violation, ViolationCategory as VC

TS = dt.datetime(2024, 5, 1, 12, 30, 15, 123456, tzinfo=dt.timezone.utc)


def make_report(violations=(), **kw):
    return ViolationReport(
        timestamp=TS, mockup_source="mock.png", impl_source="impl.png",
        config_echo=Config().to_dict(),
        match_stats={"matched": 3, "unmatched_mockup": 0, "unmatched_impl": 1},
        violations=tuple(violations), **kw,
    )


def translation(dx=12.0, box=(100, 200, 300, 80), cid="title"):
    return Violation(VC.LAYOUT_TRANSLATION, cid, cid, {"dx": dx, "dy": 0.0}, 0.14,
                     (BoundingBox(*box), BoundingBox(box[0] + int(dx), *box[1:])))


def text_content():
    box = BoundingBox(40, 400, 200, 50)
    return Violation(VC.TEXT_CONTENT, "label", "label", {"text_sim": 0.833333}, 0.166667, (box, box))


class TestJson:
    def test_empty_report(self):
        out = to_json(make_report())
        doc = json.loads(out)
        assert doc["violations"] == []
        assert b'"violations": []' in out
        assert list(doc) == ["tool_version", "timestamp", "mockup_source", "impl_source", "config",
                             "match_stats", "violations", "warnings"]
        assert doc["timestamp"] == "2024-05-01T12:30:15.123456Z"
        assert doc["tool_version"] == __version__

    def test_round_trip(self):
        report = make_report([translation()], warnings=("mockup: clamped",))
        back = from_json(to_json(report))
        assert back == report
        assert to_json(back) == to_json(report)

    def test_order_is_significant(self):
        a, b = translation(), text_content()
        assert to_json(make_report([a, b])) != to_json(make_report([b, a]))
        assert from_json(to_json(make_report([b, a]))).violations == (b, a)

    def test_violation_fields(self):
        doc = json.loads(to_json(make_report([translation()])))["violations"][0]
        assert doc == {
            "category": "LAYOUT_TRANSLATION", "mockup_id": "title", "impl_id": "title",
            "severity": 0.14, "metrics": {"dx": 12.0, "dy": 0.0},
            "evidence": {"mockup": [100, 200, 300, 80], "impl": [112, 200, 300, 80]},
        }

    def test_unknown_category(self):
        doc = json.loads(to_json(make_report([translation()])))
        doc["violations"][0]["category"] = "LAYOUT_WARP"
        with pytest.raises(errors.UnknownCategory):
            from_json(json.dumps(doc))

    def test_truncated(self):
        data = to_json(make_report([translation()]))
        with pytest.raises(errors.MalformedDocument):
            from_json(data[: len(data) // 2])

    @pytest.mark.parametrize("mutate", [
        lambda d: d.pop("violations"),
        lambda d: d.update(timestamp="yesterday"),
        lambda d: d["violations"][0].update(evidence={"mockup": [0, 0, 1], "impl": [0, 0, 1, 1]}),
        lambda d: d["violations"][0].update(metrics={"dx": 1.0}),
        lambda d: d["violations"][0].update(severity=3.0),
    ])
    def test_invalid_documents(self, mutate):
        doc = json.loads(to_json(make_report([translation()])))
        mutate(doc)
        with pytest.raises(errors.MalformedDocument):
            from_json(json.dumps(doc))

    def test_version_mismatch(self):
        doc = json.loads(to_json(make_report()))
        doc["tool_version"] = "99.0.0"
        with pytest.raises(errors.VersionMismatch):
            from_json(json.dumps(doc))

    def test_minor_version_accepted(self):
        major = __version__.split(".")[0]
        doc = json.loads(to_json(make_report()))
        doc["tool_version"] = f"{major}.99.7"
        assert from_json(json.dumps(doc)).tool_version == f"{major}.99.7"

    def test_source_date_epoch(self, monkeypatch):
        monkeypatch.setenv("SOURCE_DATE_EPOCH", "1700000000")
        assert current_timestamp() == dt.datetime(2023, 11, 14, 22, 13, 20, tzinfo=dt.timezone.utc)


def violation_strategy():
    def build(category, ids, metric_values, severity, boxes):
        mock_id, impl_id = ids
        if category is VC.RESOURCE_MISSING:
            impl_id = None
        elif category is VC.RESOURCE_EXTRA:
            mock_id = None
        metrics = dict(zip(CATEGORY_METRICS[category], metric_values))
        return Violation(category, mock_id, impl_id, metrics, severity, boxes)

    box = st.builds(BoundingBox, st.integers(0, 2000), st.integers(0, 2000), st.integers(1, 2000), st.integers(1, 2000))
    real = st.floats(-1e6, 1e6, allow_nan=False)
    ident = st.text(st.characters(codec="utf-8", exclude_categories=("Cs",)), min_size=1, max_size=12)
    return st.builds(build, st.sampled_from(list(VC)), st.tuples(ident, ident), st.lists(real, min_size=2, max_size=2),
                     st.floats(0, 1), st.tuples(box, box))


class TestProperties:
    @settings(max_examples=150, deadline=None)
    @given(st.lists(violation_strategy(), max_size=6), st.lists(st.text(max_size=20), max_size=3),
           st.datetimes(min_value=dt.datetime(1971, 1, 1), max_value=dt.datetime(2200, 1, 1)))
    def test_round_trip(self, violations, warnings, ts):
        report = ViolationReport(ts, "m", "i", Config().to_dict(), {"matched": 1}, violations, warnings)
        data = to_json(report)
        back = from_json(data)
        assert back.violations == report.violations
        assert back.timestamp == report.timestamp
        assert to_json(back) == data


FRAME = (10, 10, 50, 50)


def frame_pixels_oracle(box, width=3):
    """Pixels of the inside frame, by enumerating the box and testing edge distance."""
    x, y, w, h = box
    return {(r, c) for r in range(y, y + h) for c in range(x, x + w)
            if min(r - y, y + h - 1 - r, c - x, x + w - 1 - c) < width}


def violation_at(box, category=VC.LAYOUT_TRANSLATION):
    b = BoundingBox(*box)
    if category is VC.RESOURCE_MISSING:
        return Violation(category, "m", None, {}, 1.0, (b, b))
    metrics = dict.fromkeys(CATEGORY_METRICS[category], 1.0)
    return Violation(category, "a", "a", metrics, 0.5, (b, b))


class TestAnnotate:
    def test_no_violations_is_identity(self):
        img = ScreenImage(np.random.default_rng(0).integers(0, 256, (20, 30, 3)))
        assert annotate_image(img, []) == img

    def test_frame_pixels(self):
        img = ScreenImage.filled(100, 100)
        out = annotate_image(img, [violation_at(FRAME)]).pixels
        red = np.all(out == FAMILY_COLORS["layout"], axis=-1)
        expected = frame_pixels_oracle(FRAME)
        assert len(expected) == 564
        assert {tuple(p) for p in np.argwhere(red)} == expected
        assert np.all(out[~red] == 255)

    def test_later_violations_draw_on_top(self):
        img = ScreenImage.filled(100, 100)
        out = annotate_image(img, [violation_at(FRAME), violation_at(FRAME, VC.RESOURCE_MISSING)]).pixels
        assert tuple(out[10, 10]) == FAMILY_COLORS["resource"]

    def test_family_colors(self):
        img = ScreenImage.filled(100, 100)
        out = annotate_image(img, [violation_at((0, 0, 10, 10), VC.TEXT_COLOR)]).pixels
        assert tuple(out[0, 0]) == FAMILY_COLORS["text"]

    def test_impl_side(self):
        b_mock, b_impl = BoundingBox(0, 0, 10, 10), BoundingBox(50, 50, 10, 10)
        v = Violation(VC.LAYOUT_TRANSLATION, "a", "a", {"dx": 50.0, "dy": 50.0}, 1.0, (b_mock, b_impl))
        out = annotate_image(ScreenImage.filled(100, 100), [v], side="impl").pixels
        assert tuple(out[0, 0]) == (255, 255, 255) and tuple(out[50, 50]) == (255, 0, 0)

    def test_input_untouched(self):
        img = ScreenImage.filled(100, 100)
        annotate_image(img, [violation_at(FRAME)])
        assert np.all(img.pixels == 255)


class TestHtml:
    def test_conforming(self, tmp_path):
        img = ScreenImage.filled(100, 100)
        paths = render_html(make_report(), img, img, tmp_path / "out")
        assert sorted(p.name for p in paths) == ["annotated_impl.png", "annotated_mockup.png", "index.html"]
        assert "conform" in (tmp_path / "out" / "index.html").read_text().lower()

    def test_one_violation(self, tmp_path):
        img = ScreenImage.filled(500, 500)
        paths = render_html(make_report([translation()]), img, img, tmp_path)
        assert len(paths) == 5
        assert (tmp_path / "evidence" / "0_mock.png").exists()
        page = (tmp_path / "index.html").read_text()
        assert "LAYOUT_TRANSLATION" in page and "title" in page

    def test_escapes_ids(self, tmp_path):
        box = BoundingBox(0, 0, 10, 10)
        v = Violation(VC.RESOURCE_MISSING, "<script>", None, {}, 1.0, (box, box))
        img = ScreenImage.filled(20, 20)
        render_html(make_report([v]), img, img, tmp_path)
        assert "<script>" not in (tmp_path / "index.html").read_text()

    def test_unwritable(self, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("x")
        img = ScreenImage.filled(10, 10)
        with pytest.raises(errors.ReportIOError):
            render_html(make_report(), img, img, blocker / "sub")
