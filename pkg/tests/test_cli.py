import subprocess
import sys

import numpy as np
import pytest

from smm.cli import main
from smm.flag import FlagSignature
from smm.io import read_model, write_model
from smm.metrics import (
    embedded_metric,
    flag_m_metric,
    random_flag_tangent,
    random_stiefel_tangent,
    stiefel_m_metric,
)
from smm.linalg import cholesky_upper
from smm.stiefel import cartan_metric, geometric_mean_t


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, dict(line.split("=", 1) for line in out.splitlines())


@pytest.fixture
def flag_file(tmp_path, capsys):
    path = tmp_path / "f.smm"
    run(capsys, "sample", "--kind", "flag", "--n", 5, "--signature", "1,3",
        "--params", "0,1,3", "--seed", 7, "-o", path)
    return path


def test_sample_deterministic(tmp_path, capsys):
    paths = [tmp_path / "a.smm", tmp_path / "b.smm"]
    for p in paths:
        run(capsys, "sample", "--kind", "grassmann", "--n", 6, "--k", 2,
            "--params", "1,-1", "--seed", 11, "-o", p)
    assert paths[0].read_bytes() == paths[1].read_bytes()
    assert "seed 11" in paths[0].read_text()


@pytest.mark.parametrize(
    "extra",
    [
        ["--kind", "grassmann", "--n", 5, "--k", 2, "--params", "1,0"],
        ["--kind", "flag", "--n", 6, "--signature", "1,3,4", "--params", "0,1,2,5"],
        ["--kind", "stiefel", "--n", 5, "--k", 3],
    ],
)
def test_sampled_files_validate(tmp_path, capsys, extra):
    path = tmp_path / "x.smm"
    assert run(capsys, "sample", *extra, "--seed", 3, "-o", path)[0] == 0
    code, out = run(capsys, "validate", path)
    assert code == 0 and out["passed"] == "true"


def test_validate_failure_exit_2(tmp_path, capsys, flag_file):
    Xp = read_model(flag_file)
    Xp.X[0, 0] += 1e-3
    bad = tmp_path / "bad.smm"
    write_model(Xp, bad)
    code, out = run(capsys, "validate", bad)
    assert code == 2 and out["passed"] == "false"


def test_validate_not_generic_exit_3(capsys, flag_file):
    code, out = run(capsys, "validate", flag_file, "--generic")
    assert code == 3 and out["passed"] == "refused"


def test_validate_tol_env(capsys, flag_file, monkeypatch):
    monkeypatch.setenv("SMM_DEFAULT_TOL", "1e-30")
    code, _ = run(capsys, "validate", flag_file)
    assert code == 2


def test_convert_and_extract(tmp_path, capsys, flag_file):
    out = tmp_path / "c.smm"
    assert run(capsys, "convert", flag_file, "--to-params", "0,1,4", "--t", 0.5, "-o", out)[0] == 0
    assert tuple(read_model(out).params) == (0.0, 1.0, 3.5)
    assert run(capsys, "validate", out)[0] == 0
    assert run(capsys, "convert", flag_file, "--to-params", "1,0,3", "--t", 0.5, "-o", out)[0] == 1
    basis = tmp_path / "b.smm"
    assert run(capsys, "extract", flag_file, "-o", basis)[0] == 0
    assert [b.shape[1] for b in read_model(basis).blocks] == [1, 2, 2]


def test_stiefel_convert_and_factors(tmp_path, capsys):
    A = np.array([[2.0, 0.5], [0.5, 1.0]])
    B = np.array([[1.0, -0.2], [-0.2, 3.0]])
    fa, fb, s, s2, fq = (tmp_path / f"{x}.smm" for x in "abcde")
    write_model(A, fa, kind="spd")
    write_model(B, fb, kind="spd")
    run(capsys, "sample", "--kind", "stiefel", "--n", 4, "--spd-file", fa, "--seed", 1, "-o", s)
    assert run(capsys, "convert", s, "--to-spd", fb, "--t", 0.25, "-o", s2)[0] == 0
    Y = read_model(s2).Y
    assert np.linalg.norm(Y.T @ Y - geometric_mean_t(A, B, 0.25)) < 1e-9
    assert run(capsys, "extract", s, "-o", fq)[0] == 0
    Q, R = read_model(fq)
    assert np.allclose(Q[:, :2] @ R, read_model(s).Y)


def test_metric_commands(tmp_path, capsys, flag_file, rng):
    s = FlagSignature(5, (1, 3))
    B, C = random_flag_tangent(s, rng), random_flag_tangent(s, rng)
    fb, fc = tmp_path / "b.smm", tmp_path / "c.smm"
    write_model(B, fb)
    write_model(C, fc)
    code, out = run(capsys, "metric", "--kind", "flag", flag_file, fb, fc)
    assert code == 0
    assert float(out["metric"]) == flag_m_metric(B, C, (0, 1, 3))
    assert abs(float(out["metric"]) - float(out["embedded"])) < 1e-10 * abs(float(out["metric"]))

    A = np.array([[2.0, 0.3], [0.3, 1.0]])
    fa, st_file = tmp_path / "a.smm", tmp_path / "s.smm"
    write_model(A, fa, kind="spd")
    run(capsys, "sample", "--kind", "stiefel", "--n", 5, "--spd-file", fa, "--seed", 4, "-o", st_file)
    Bs, Cs = random_stiefel_tangent(5, 2, rng), random_stiefel_tangent(5, 2, rng)
    write_model(Bs, fb)
    write_model(Cs, fc)
    code, out = run(capsys, "metric", "--kind", "stiefel", st_file, fb, fc)
    assert float(out["metric"]) == stiefel_m_metric(Bs, Cs, cholesky_upper(A))

    X, Y = np.array([[1.0, 2.0], [2.0, 0.0]]), np.eye(2)
    write_model(X, fb, kind="sym")
    write_model(Y, fc, kind="sym")
    code, out = run(capsys, "metric", "--kind", "cartan", fa, fb, fc)
    assert float(out["metric"]) == cartan_metric(A, X, Y)


def test_metric_prints_17_digits(tmp_path, capsys):
    fa, fx = tmp_path / "a.smm", tmp_path / "x.smm"
    write_model(np.eye(2) * 3.0, fa, kind="spd")
    write_model(np.eye(2), fx, kind="sym")
    main(["metric", "--kind", "cartan", str(fa), str(fx), str(fx)])
    assert capsys.readouterr().out.strip() == "metric=0.22222222222222221"


def test_cond_and_params(capsys):
    assert run(capsys, "cond", "--params", "1,-1")[1]["cond"] == "1"
    assert run(capsys, "cond", "--params", "1,0")[1]["cond"] == "inf"
    _, out = run(capsys, "params", "--n", 5, "--signature", "1,4", "--traceless")
    assert out["params"] == "-1.0,0.0,1.0"
    _, out = run(capsys, "params", "--n", 6, "--signature", "1,2,4", "--optimize-cond", 0.01)
    assert float(out["cond"]) <= 1.01
    _, out = run(capsys, "params", "--n", 4, "--signature", "1,2", "--optimize-cond", 0.1, "--traceless")
    assert float(out["cond"]) <= 1.1


def test_geodesic(tmp_path, capsys):
    fa, fb, fo = (tmp_path / f"{x}.smm" for x in "abo")
    write_model(np.eye(2), fa, kind="spd")
    write_model(np.diag([4.0, 9.0]), fb, kind="spd")
    assert run(capsys, "geodesic", fa, fb, "--t", 0.5, "-o", fo)[0] == 0
    assert np.allclose(read_model(fo), np.diag([2.0, 3.0]))


def test_missing_file_exit_1(capsys, tmp_path):
    assert main(["validate", str(tmp_path / "nope.smm")]) == 1


def test_malformed_file_exit_1(capsys, tmp_path):
    bad = tmp_path / "bad.smm"
    bad.write_text("hello\n")
    assert main(["validate", str(bad)]) == 1
    assert "ParseError" in capsys.readouterr().err


def test_module_entry_point(tmp_path):
    out = subprocess.run(
        [sys.executable, "-m", "smm.cli", "cond", "--params", "1,2,3"],
        capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "cond=3"
