"""GFLD1 binary snapshot round trips and error handling."""

import numpy as np
import pytest

from gevreyflow import snapshot
from gevreyflow.errors import ConfigurationError
from gevreyflow.models import AnalyticSeries, ModelState, initial_data

from conftest import complex_velocity, real_velocity


class TestFieldRoundTrip:
    def test_real_field(self, grid2d, tmp_path):
        f = real_velocity(grid2d, 3)
        path = tmp_path / "field.gfld"
        snapshot.write_field(path, f)
        back = snapshot.read_field(path)
        assert back.grid == f.grid
        assert np.array_equal(back.coeffs, f.coeffs)
        assert back.hermitian and back.div_free and back.mean_free

    def test_complex_field_flags(self, grid2d, tmp_path):
        f = complex_velocity(grid2d, 4)
        path = tmp_path / "field.gfld"
        snapshot.write_field(path, f)
        back = snapshot.read_field(path)
        assert not back.hermitian
        assert np.array_equal(back.coeffs, f.coeffs)

    def test_no_temp_file_left(self, grid2d, tmp_path):
        snapshot.write_field(tmp_path / "f.gfld", real_velocity(grid2d, 1))
        assert sorted(p.name for p in tmp_path.iterdir()) == ["f.gfld"]

    def test_magic_header(self, grid2d, tmp_path):
        path = tmp_path / "f.gfld"
        snapshot.write_field(path, real_velocity(grid2d, 2))
        assert path.read_bytes()[:5] == b"GFLD1"


class TestErrors:
    def test_bad_magic(self, tmp_path):
        path = tmp_path / "bad.gfld"
        path.write_bytes(b"NOPE1" + bytes(64))
        with pytest.raises(ConfigurationError):
            snapshot.read_field(path)

    def test_truncated_header(self, tmp_path):
        path = tmp_path / "short.gfld"
        path.write_bytes(b"GF")
        with pytest.raises(ConfigurationError):
            snapshot.read_field(path)

    def test_truncated_payload(self, grid2d, tmp_path):
        path = tmp_path / "cut.gfld"
        snapshot.write_field(path, real_velocity(grid2d, 5))
        data = path.read_bytes()
        path.write_bytes(data[: len(data) // 2])
        with pytest.raises(ConfigurationError):
            snapshot.read_field(path)


class TestStateRoundTrip:
    def test_boussinesq_state(self, grid2d, tmp_path):
        state = initial_data("bouss_stratified", grid2d, g=2.5)
        snapshot.write_state(tmp_path / "state", state)
        back = snapshot.read_state(tmp_path / "state")
        assert back.tag == "boussinesq"
        assert back.g == 2.5
        for name in state.members:
            assert np.array_equal(back.members[name].coeffs, state.members[name].coeffs)

    def test_analytic_series_preserved(self, grid2d, tmp_path):
        state = initial_data(
            "analytic_gaussian_modes", grid2d, series=AnalyticSeries((0.5, 0.25))
        )
        snapshot.write_state(tmp_path / "state", state)
        back = snapshot.read_state(tmp_path / "state")
        assert back.series.coeffs == (0.5, 0.25)
