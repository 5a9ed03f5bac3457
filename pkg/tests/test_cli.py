import json

import numpy as np
import pytest

from spheresym.cli import main


def _write_data(tmp_path, n=16, d=3, seed=0, name="data.csv"):
    data = np.random.default_rng(seed).standard_normal((n, d))
    path = tmp_path / name
    np.savetxt(path, data, delimiter=",")
    return path


def test_test_command_basic(tmp_path, capsys):
    path = _write_data(tmp_path)
    out_json = tmp_path / "out.json"
    rc = main(["test", "--input", str(path), "--B", "50", "--seed", "3",
               "--output", str(out_json)])
    assert rc == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("statistic ")
    assert lines[1].startswith("p_value ")
    assert lines[2] in ("reject true", "reject false")
    payload = json.loads(out_json.read_text())
    assert payload["method"] == "monte-carlo"
    assert payload["B"] == 50 and payload["seed"] == 3
    assert float(lines[1].split()[1]) == pytest.approx(payload["p_value"], rel=1e-9)


def test_test_command_deterministic_json(tmp_path, capsys):
    path = _write_data(tmp_path, seed=1)
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["test", "--input", str(path), "--B", "80", "--seed", "7", "--output", str(out1)]) == 0
    assert main(["test", "--input", str(path), "--B", "80", "--seed", "7", "--output", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_test_command_exact(tmp_path, capsys):
    path = _write_data(tmp_path, n=8, d=2, seed=2)
    rc = main(["test", "--input", str(path), "--exact"])
    assert rc == 0
    out = capsys.readouterr().out
    p = float(out.splitlines()[1].split()[1])
    assert p >= 2.0 ** (1 - 8)


def test_test_command_missing_input(tmp_path, capsys):
    rc = main(["test", "--input", str(tmp_path / "nope.csv")])
    assert rc == 1
    assert "error" in capsys.readouterr().err


def test_test_command_bad_alpha_and_B(tmp_path, capsys):
    path = _write_data(tmp_path, seed=4)
    assert main(["test", "--input", str(path), "--alpha", "1.5"]) == 2
    assert main(["test", "--input", str(path), "--B", "0"]) == 2


def test_missing_required_flag_exits_2(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["test"])
    assert exc.value.code == 2


def test_zeta_gaussian_identity(capsys):
    rc = main(["zeta-gaussian", "--sigma", "identity", "--d", "4"])
    assert rc == 0
    assert capsys.readouterr().out.strip() == "0 0"


def test_zeta_gaussian_matrix(tmp_path, capsys):
    path = tmp_path / "sigma.csv"
    np.savetxt(path, np.diag([4.0, 1.0]), delimiter=",")
    rc = main(["zeta-gaussian", "--sigma", str(path), "--d", "2", "--haar-m", "20000"])
    assert rc == 0
    est, se = map(float, capsys.readouterr().out.split())
    assert abs(est - 0.0158370005815) < 4 * se


def test_zeta_gaussian_errors(tmp_path, capsys):
    assert main(["zeta-gaussian", "--sigma", "identity", "--d", "3", "--haar-m", "0"]) == 2
    path = tmp_path / "sigma.csv"
    np.savetxt(path, np.diag([4.0, 1.0]), delimiter=",")
    assert main(["zeta-gaussian", "--sigma", str(path), "--d", "3"]) == 2
    np.savetxt(path, np.array([[1.0, 2.0], [2.0, 1.0]]), delimiter=",")
    assert main(["zeta-gaussian", "--sigma", str(path), "--d", "2"]) == 2


def test_simulate_command(tmp_path, capsys):
    cfg = tmp_path / "exp.cfg"
    cfg.write_text(
        "name = smoke\n"
        "R = 4\n"
        "B = 30\n"
        "seed = 5\n"
        f"output = {tmp_path / 'results' / 'smoke'}\n"
        "cell = gaussian(rho=0,d=2) n=10\n"
    )
    rc = main(["simulate", "--config", str(cfg)])
    assert rc == 0
    out = capsys.readouterr().out
    assert "gaussian(rho=0.0,d=2)" in out
    assert (tmp_path / "results" / "smoke.csv").exists()
    payload = json.loads((tmp_path / "results" / "smoke.json").read_text())
    assert payload["config"]["R"] == 4


def test_simulate_empty_grid_exits_2(tmp_path, capsys):
    cfg = tmp_path / "empty.cfg"
    cfg.write_text("name = empty\n")
    assert main(["simulate", "--config", str(cfg)]) == 2
    assert "empty" in capsys.readouterr().err


def test_pitman_command(tmp_path, capsys):
    out = tmp_path / "pitman"
    rc = main(["pitman", "--gamma", "0", "--n-grid", "50", "--R", "3", "--B", "30",
               "--output", str(out)])
    assert rc == 0
    assert (tmp_path / "pitman.csv").exists()
    # invalid local alternative -> usage error
    assert main(["pitman", "--gamma", "0.1", "--n-grid", "50", "--R", "2",
                 "--output", str(out)]) == 2


def test_subsample_command(tmp_path, capsys):
    path = _write_data(tmp_path, n=40, d=2, seed=6)
    out = tmp_path / "sub"
    rc = main(["subsample", "--input", str(path), "--sizes", "10", "15",
               "--R", "3", "--B", "30", "--output", str(out)])
    assert rc == 0
    rows = (tmp_path / "sub.csv").read_text().splitlines()
    assert len(rows) == 3  # header + two sizes
    assert main(["subsample", "--input", str(path), "--sizes", "100",
                 "--R", "2", "--output", str(out)]) == 2


def test_threads_flag_validates(tmp_path):
    path = _write_data(tmp_path, seed=8)
    with pytest.raises(SystemExit) as exc:
        main(["--threads", "0", "test", "--input", str(path)])
    assert exc.value.code == 2
    assert main(["--threads", "1", "test", "--input", str(path), "--B", "20"]) == 0
