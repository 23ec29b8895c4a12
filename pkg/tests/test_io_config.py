import numpy as np
import pytest

from wavefeat.config import PipelineConfig, parse_config_text
from wavefeat.io import read_csv, read_fvx, read_matrix, read_signal, write_csv, write_fvx, write_matrix
from wavefeat.operator import FormatError


def test_fvx_layout(tmp_path):
    V = np.arange(6, dtype=float).reshape(3, 2)
    path = tmp_path / "v.fvx"
    write_fvx(path, V)
    blob = path.read_bytes()
    assert blob[:4] == b"FVX1"
    assert int.from_bytes(blob[4:8], "little") == 3 and int.from_bytes(blob[8:12], "little") == 2
    # column-major payload
    np.testing.assert_array_equal(np.frombuffer(blob[12:], "<f8"), [0, 2, 4, 1, 3, 5])
    np.testing.assert_array_equal(read_fvx(path), V)


def test_fvx_errors(tmp_path):
    bad = tmp_path / "bad.fvx"
    bad.write_bytes(b"FVX2" + bytes(8))
    with pytest.raises(FormatError, match="magic"):
        read_fvx(bad)
    short = tmp_path / "short.fvx"
    write_fvx(short, np.ones((4, 4)))
    short.write_bytes(short.read_bytes()[:-1])
    with pytest.raises(FormatError, match="expected"):
        read_fvx(short)


def test_csv_round_trip(tmp_path, rng):
    x = rng.standard_normal(10)
    path = tmp_path / "s.csv"
    write_csv(path, {"t": np.arange(10), "U": x}, "abc123")
    assert path.read_text().splitlines()[0] == "t,U,config=abc123"
    names, data = read_csv(path)
    assert names == ["t", "U"]
    np.testing.assert_array_equal(read_signal(path, "U"), x)
    np.testing.assert_array_equal(read_signal(path), x)


def test_matrix_csv_input(tmp_path, rng):
    V = rng.standard_normal((8, 3))
    path = tmp_path / "V.csv"
    write_matrix(path, V, "h")
    np.testing.assert_array_equal(read_matrix(path), V)
    path.write_text("a,b\n1,2\n3,x\n")
    with pytest.raises(FormatError):
        read_matrix(path)


def test_config_round_trip():
    cfg = PipelineConfig(wavelet="haar", depth=4, refilter=False, keep="r1,r3", threshold=2.5,
                         seed=9, input="in.fvx", output="out.fvx")
    assert PipelineConfig.from_text(cfg.to_text()) == cfg


def test_config_parsing():
    values = parse_config_text("# comment\nnoise-sigma = 0.5\n\nkeep = r1,r2  # trailing\n")
    assert values == {"noise_sigma": "0.5", "keep": "r1,r2"}
    with pytest.raises(ValueError, match="line 1"):
        parse_config_text("nonsense")
    with pytest.raises(ValueError, match="unknown"):
        PipelineConfig.from_text("colour = red\n")


def test_hash_ignores_paths():
    a = PipelineConfig(input="a", output="b")
    b = PipelineConfig(input="c", output="d")
    assert a.hash() == b.hash()
    assert a.hash() != PipelineConfig(depth=4).hash()
    assert a.hash(P=1) != a.hash(P=2)
