import numpy as np
import pytest

from spiralrope import formats
from spiralrope.cli import main
from spiralrope.ropecore import RopeConfig, apply_spiral


def _csv(tmp_path, *args):
    out = tmp_path / "pts.csv"
    assert main(["freq-support", *args, "--out", str(out)]) == 0
    return out.read_text()


def test_freq_support_spiral(tmp_path):
    text = _csv(tmp_path, "--dim", "1024", "--k", "8", "--variant", "spiral")
    assert text.splitlines()[0] == formats.CSV_HEADER
    rows = formats.read_frequency_csv(text)
    assert len(rows) == 1024
    assert {float(r["direction_deg"]) for r in rows} == {0, 22.5, 45, 67.5, 90, 112.5, 135, 157.5}


def test_freq_support_axial_small(tmp_path):
    rows = formats.read_frequency_csv(_csv(tmp_path, "--dim", "8", "--variant", "axial"))
    assert len(rows) == 8
    assert {r["direction_deg"] for r in rows} == {"0", "90"}
    assert not any(r["fx"].startswith("-0") and float(r["fx"]) == 0 for r in rows)


def test_freq_support_both(tmp_path):
    rows = formats.read_frequency_csv(_csv(tmp_path, "--dim", "64", "--k", "4", "--variant", "both"))
    assert len(rows) == 128


def test_freq_support_deterministic(tmp_path):
    a = _csv(tmp_path, "--dim", "256", "--k", "8")
    b = _csv(tmp_path, "--dim", "256", "--k", "8")
    assert a == b


def test_freq_support_odd_k(capsys):
    assert main(["freq-support", "--k", "5"]) != 0
    assert "even" in capsys.readouterr().err


def test_unwritable_path(tmp_path, capsys):
    bad = tmp_path / "missing" / "pts.csv"
    assert main(["freq-support", "--dim", "8", "--variant", "axial", "--out", str(bad)]) != 0
    assert str(bad) in capsys.readouterr().err


def _reconstruct(tmp_path, *args):
    out = tmp_path / "r.pgm"
    metrics = tmp_path / "r.txt"
    assert main(["reconstruct", *args, "--out", str(out), "--metrics", str(metrics)]) == 0
    return formats.read_pgm(out.read_bytes()), formats.parse_metrics(metrics.read_text())


def test_reconstruct_spiral_beats_axial(tmp_path):
    common = ["--image", "circle", "--grid", "64", "--dim", "1024", "--k", "8"]
    _, sp = _reconstruct(tmp_path, *common, "--variant", "spiral")
    _, ax = _reconstruct(tmp_path, *common, "--variant", "axial")
    assert float(sp["mse"]) < float(ax["mse"])
    assert int(ax["kept_bins"]) == 41 and int(sp["kept_bins"]) == 121
    assert sp["clamped"] == "0"


def test_reconstruct_full_mask(tmp_path):
    _, m = _reconstruct(tmp_path, "--image", "circle", "--full-mask")
    assert float(m["mse"]) <= 1e-12


def test_reconstruct_point_pgm(tmp_path):
    img, _ = _reconstruct(tmp_path, "--image", "point")
    assert img.shape == (64, 64) and img.size == 4096
    assert img.max() == 255


def test_reconstruct_metrics_deterministic(tmp_path):
    a = _reconstruct(tmp_path, "--image", "circle", "--variant", "axial")[1]
    b = _reconstruct(tmp_path, "--image", "circle", "--variant", "axial")[1]
    assert a == b


def test_reconstruct_bad_radius(tmp_path):
    assert main(["reconstruct", "--radius", "32", "--out", str(tmp_path / "x.pgm")]) != 0


def test_pgm_header(tmp_path):
    out = tmp_path / "r.pgm"
    main(["reconstruct", "--image", "point", "--out", str(out)])
    data = out.read_bytes()
    assert data.startswith(b"P5\n64 64\n255\n")
    assert len(data) == len(b"P5\n64 64\n255\n") + 4096
    assert (tmp_path / "r.txt").exists()


def test_verify_suite(capsys):
    assert main(["verify", "--suite", "relative", "--trials", "500", "--seed", "9"]) == 0
    out = capsys.readouterr().out
    assert "relative identity [spiral K=16]" in out and "FAIL" not in out


@pytest.mark.parametrize("seed", ["0", "12345", "0xffffffffffffffff"])
def test_verify_seeds(seed):
    assert main(["verify", "--suite", "translation", "--trials", "5", "--seed", seed]) == 0


def test_verify_failure_exit(monkeypatch, capsys):
    from spiralrope import cli, verify

    def broken(trials, seed):
        return [verify.Check("always broken", 1.0, 0.0)]

    monkeypatch.setitem(cli.SUITES, "relative", (broken, 1))
    assert main(["verify", "--suite", "relative"]) == 1
    assert "always broken" in capsys.readouterr().err


def test_bench_report(tmp_path):
    out = tmp_path / "bench.txt"
    assert main(["bench", "--dim", "64", "--grid", "8x8", "--iters", "5", "--out", str(out)]) == 0
    m = formats.parse_metrics(out.read_text())
    assert float(m["ratio"]) > 0
    assert m["rotation_pairs"] == "32"


def test_bench_single_iter(tmp_path):
    out = tmp_path / "bench.txt"
    assert main(["bench", "--grid", "4x4", "--iters", "1", "--out", str(out)]) == 0
    assert "ratio=" in out.read_text()


def test_bench_mismatched_dims():
    assert main(["bench", "--axial-dim", "64", "--spiral-dim", "128", "--iters", "1"]) != 0


def test_rotate_round_trip(tmp_path, rng):
    vecs = rng.normal(size=(5, 32))
    inp = tmp_path / "in.txt"
    inp.write_text(formats.vectors_text(vecs))
    out = tmp_path / "out.txt"
    args = ["rotate", "--dim", "32", "--k", "4", "--variant", "spiral", "--pos", "3,-2"]
    assert main([*args, "--input", str(inp), "--output", str(out)]) == 0
    got = formats.read_vectors(out.read_text())
    np.testing.assert_array_equal(got, apply_spiral(vecs, np.array([3.0, -2.0]), RopeConfig(32, 4)))


def test_rotate_1d(tmp_path):
    inp = tmp_path / "in.txt"
    inp.write_text("1 0 1 0\n")
    out = tmp_path / "out.txt"
    assert main(["rotate", "--dim", "4", "--variant", "1d", "--pos", "0", "--input", str(inp), "--output", str(out)]) == 0
    assert formats.read_vectors(out.read_text()).tolist() == [[1, 0, 1, 0]]


def test_rotate_wrong_length(tmp_path):
    inp = tmp_path / "in.txt"
    inp.write_text("1 2 3\n")
    assert main(["rotate", "--dim", "32", "--input", str(inp)]) != 0
