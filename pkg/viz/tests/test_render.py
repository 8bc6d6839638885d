"""Rendering tests over the bundled record fixtures."""

import json
from pathlib import Path

import pytest

from gevreyviz.records import RecordError, read_gfld, read_summary, read_trajectory
from gevreyviz.render import FIGURE_KINDS, PlotRequest, render

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def ray_files():
    return sorted(str(p) for p in (FIXTURES / "sweep").glob("ray_*.jsonl"))


class TestReaders:
    def test_trajectory_records(self):
        records = read_trajectory(ray_files()[0])
        assert records[0]["s"] == 0.0
        assert records[-1]["status"] in ("completed", "blown_up", "radius_exhausted")

    def test_summary(self):
        summary = read_summary(FIXTURES / "sweep" / "summary.json")
        assert len(summary["per_theta"]) == 4

    def test_gfld_snapshot(self):
        d, n, cutoff, coeffs = read_gfld(FIXTURES / "field_sqg_two_mode.gfld")
        assert (d, n, cutoff) == (2, 16, 5)
        assert coeffs.shape == (1, 16, 16)

    def test_error_cites_line(self, tmp_path):
        bad = tmp_path / "bad.jsonl"
        good = read_trajectory(ray_files()[0])
        bad.write_text(json.dumps(good[0]) + "\n" + "{\"model\": \"euler\"}\n")
        with pytest.raises(RecordError, match=r":2:"):
            read_trajectory(bad)


class TestRender:
    def test_all_kinds_render(self, tmp_path):
        requests = {
            "norm_decay": PlotRequest("norm_decay", tuple(ray_files()), str(tmp_path / "n.png")),
            "region_polar": PlotRequest(
                "region_polar", (str(FIXTURES / "sweep" / "summary.json"),), str(tmp_path / "r.png")
            ),
            "spectrum": PlotRequest(
                "spectrum",
                (str(FIXTURES / "field_sqg_two_mode.gfld"),),
                str(tmp_path / "s.png"),
                {"r": 2.0, "beta": 0.3},
            ),
            "estimate_histogram": PlotRequest(
                "estimate_histogram",
                (
                    str(FIXTURES / "estimates" / "ratios.csv"),
                    str(FIXTURES / "estimates" / "c_emp.json"),
                ),
                str(tmp_path / "e.png"),
            ),
        }
        assert set(requests) == set(FIGURE_KINDS)
        for request in requests.values():
            out = render(request)
            assert Path(out).stat().st_size > 0

    def test_deterministic_output(self, tmp_path):
        def once(name):
            path = str(tmp_path / name)
            render(PlotRequest("norm_decay", tuple(ray_files()), path))
            return Path(path).read_bytes()

        assert once("a.png") == once("b.png")

    def test_unknown_kind(self):
        with pytest.raises(RecordError):
            PlotRequest("heatmap", ("x",), "y.png")

    def test_censored_sweep_markers_at_cap(self):
        # every ray in the steady-state fixture is censored at the same radius
        summary = read_summary(FIXTURES / "sweep" / "summary.json")
        radii = {round(t["s_empirical"], 12) for t in summary["per_theta"]}
        assert all(t["censored"] for t in summary["per_theta"])
        assert len(radii) == 1
