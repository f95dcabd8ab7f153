"""
Tests for matrix files, atomic writes and layered settings
"""
from pathlib import Path

import numpy as np
import pytest

from src.core.errors import ContainerFormatError
from src.core.models import SolverKind
from src.storage import (
    decode_matrix,
    encode_matrix,
    load_config_file,
    load_experiment_spec,
    read_matrix,
    read_vector,
    resolve_config,
    worker_cap,
    write_matrix,
)
from src.storage.matrix_io import HEADER

ROOT = Path(__file__).resolve().parent.parent


class TestVspmContainer:

    def test_complex_matrix(self, tmp_path, rng):
        a = rng.standard_normal((4, 3)) + 1j * rng.standard_normal((4, 3))
        path = write_matrix(tmp_path / "a.vspm", a)
        back = read_matrix(path)
        assert back.dtype == np.complex128
        np.testing.assert_array_equal(back, a)

    def test_real_vector(self, tmp_path):
        path = write_matrix(tmp_path / "y.vspm", np.arange(5.0))
        assert read_matrix(path).shape == (5, 1)
        np.testing.assert_array_equal(read_vector(path), np.arange(5.0))

    def test_header_layout(self):
        data = encode_matrix(np.zeros((2, 3)))
        magic, version, tag, rows, cols = HEADER.unpack_from(data)
        assert (magic, version, tag, rows, cols) == (b"VSPM", 1, 2, 2, 3)
        assert len(data) == HEADER.size + 6 * 8

    def test_bad_magic(self):
        data = bytearray(encode_matrix(np.ones(3)))
        data[:4] = b"NOPE"
        with pytest.raises(ContainerFormatError, match="magic"):
            decode_matrix(bytes(data))

    def test_bad_version(self):
        data = bytearray(encode_matrix(np.ones(3)))
        data[4] = 9
        with pytest.raises(ContainerFormatError, match="version"):
            decode_matrix(bytes(data))

    def test_truncated_payload(self):
        data = encode_matrix(np.ones(3))
        with pytest.raises(ContainerFormatError, match="payload"):
            decode_matrix(data[:-1])

    def test_too_short(self):
        with pytest.raises(ContainerFormatError):
            decode_matrix(b"VSPM")

    def test_rejects_3d(self):
        with pytest.raises(ContainerFormatError):
            encode_matrix(np.zeros((2, 2, 2)))

    def test_no_temp_files_left(self, tmp_path):
        write_matrix(tmp_path / "a.vspm", np.eye(2))
        assert [p.name for p in tmp_path.iterdir()] == ["a.vspm"]


class TestTextFormats:

    def test_csv_complex_cells(self, tmp_path):
        path = tmp_path / "a.csv"
        path.write_text("# header\n1, 2+1i\n\n-3j, 4.5\n")
        np.testing.assert_array_equal(read_matrix(path), np.array([[1, 2 + 1j], [-3j, 4.5]]))

    def test_csv_ragged(self, tmp_path):
        path = tmp_path / "a.csv"
        path.write_text("1,2\n3\n")
        with pytest.raises(ContainerFormatError):
            read_matrix(path)

    def test_pgm_ascii(self, tmp_path):
        path = tmp_path / "img.pgm"
        path.write_text("P2\n# comment\n3 2\n4\n0 1 2\n3 4 0\n")
        np.testing.assert_allclose(read_matrix(path), np.array([[0, 0.25, 0.5], [0.75, 1.0, 0.0]]))

    def test_pgm_binary(self, tmp_path):
        path = tmp_path / "img.pgm"
        path.write_bytes(b"P5\n2 2\n255\n" + bytes([0, 255, 51, 0]))
        np.testing.assert_allclose(read_matrix(path), np.array([[0.0, 1.0], [0.2, 0.0]]))

    def test_pgm_short_raster(self, tmp_path):
        path = tmp_path / "img.pgm"
        path.write_bytes(b"P5\n2 2\n255\n" + bytes([0, 255]))
        with pytest.raises(ContainerFormatError):
            read_matrix(path)

    def test_read_vector_rejects_matrix(self, tmp_path):
        path = write_matrix(tmp_path / "a.vspm", np.eye(3))
        with pytest.raises(ContainerFormatError, match="expected a vector"):
            read_vector(path)


class TestSettings:

    def test_toml_file(self, tmp_path):
        path = tmp_path / "vsp.toml"
        path.write_text('solver = "gd"\nt_in = 500\nbeta = 1.2\n')
        config = resolve_config(path)
        assert config.solver == SolverKind.GD
        assert config.t_in == 500
        assert config.mrf.beta == 1.2

    def test_yaml_file(self, tmp_path):
        path = tmp_path / "vsp.yaml"
        path.write_text("alpha: -0.1\ntopology: grid\nrows: 4\ncols: 5\n")
        config = resolve_config(path)
        assert config.mrf.alpha == -0.1
        assert (config.topology.rows, config.topology.cols) == (4, 5)

    def test_nested_tables_rejected(self, tmp_path):
        path = tmp_path / "vsp.toml"
        path.write_text("[mrf]\nalpha = 0.3\n")
        with pytest.raises(ValueError, match="flat"):
            load_config_file(path)

    def test_unknown_key(self, tmp_path):
        path = tmp_path / "vsp.yaml"
        path.write_text("gamma_shape: 3\n")
        with pytest.raises(ValueError, match="Unknown configuration key"):
            resolve_config(path)

    def test_unparseable(self, tmp_path):
        path = tmp_path / "vsp.toml"
        path.write_text("t_in = = 3\n")
        with pytest.raises(ValueError):
            load_config_file(path)

    def test_layers_override_file(self, tmp_path):
        path = tmp_path / "vsp.toml"
        path.write_text("t_in = 50\nt_out = 3\n")
        config = resolve_config(path, {"t_in": 70, "t_out": None}, {"t_in": 90})
        assert config.t_in == 90
        assert config.t_out == 3

    def test_shipped_configs_load(self):
        assert resolve_config(ROOT / "config/vsp.yaml").solver == SolverKind.ELBO
        assert resolve_config(ROOT / "config/vsp.toml").t_in == 7000

    def test_shipped_experiments_load(self):
        smoke = load_experiment_spec(ROOT / "experiments/smoke.toml")
        assert smoke.m_grid == [20, 30]
        two_block = load_experiment_spec(ROOT / "experiments/two_block_snr.yaml")
        assert len(two_block.grid_points()) == 6


class TestWorkerCap:

    def test_uncapped(self, monkeypatch):
        monkeypatch.setenv("VSP_THREADS", "")
        assert worker_cap(8) == 8

    def test_capped(self, monkeypatch):
        monkeypatch.setenv("VSP_THREADS", "2")
        assert worker_cap(8) == 2
        assert worker_cap(1) == 1

    def test_garbage_ignored(self, monkeypatch):
        monkeypatch.setenv("VSP_THREADS", "many")
        assert worker_cap(3) == 3
