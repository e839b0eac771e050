import numpy as np
import pytest

from fdshift import cli
from fdshift.constellation import dump_points, make_qam


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_bound_command_value(capsys):
    code, out, _ = run_cli(capsys, "bound", "--n", "128", "--e", "1",
                           "--beta", "0.2", "--sigma2", "1")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "n,e,beta,sigma2,bound,bound_per_channel"
    cols = lines[1].split(",")
    expect = (1.0 / 256.0) * (1.2 / 1.4)
    assert float(cols[4]) == pytest.approx(expect, rel=1e-14)
    assert float(cols[5]) == pytest.approx(2 * expect, rel=1e-14)


def test_bound_command_grid(capsys):
    code, out, _ = run_cli(capsys, "bound", "--beta", "0.1,0.2,0.4")
    assert code == 0
    assert len(out.splitlines()) == 4


def test_check_constellation_symmetric(tmp_path, capsys):
    path = tmp_path / "qam.txt"
    dump_points(make_qam(16, 1.0), path)
    code, out, _ = run_cli(capsys, "check-constellation", "--file", str(path))
    assert code == 0
    assert out.startswith("symmetric: c = -1")
    assert "orbit length 2" in out


def test_check_constellation_shifted(tmp_path, capsys):
    path = tmp_path / "qam.txt"
    dump_points(make_qam(16, 1.0), path)
    code, out, _ = run_cli(capsys, "check-constellation", "--file", str(path),
                           "--beta", "0.2")
    assert code == 0
    assert out.strip() == "identifiable"


def test_missing_file_is_runtime_error(tmp_path, capsys):
    code, _, err = run_cli(capsys, "check-constellation", "--file",
                           str(tmp_path / "nope.txt"))
    assert code == 1
    assert "error:" in err


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        cli.main(["no-such-command"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        cli.main([])
    assert exc.value.code == 2


CONFIG = """\
# tiny smoke sweep
order = 16
frame_len = 128
beta_grid = 0.2
eb_n0_db_grid = 20
sir_db_grid = -50
trials = 3
master_seed = 99
estimators = em, perfect
"""


def test_sweep_reproducible(tmp_path, capsys):
    cfg = tmp_path / "exp.cfg"
    cfg.write_text(CONFIG)
    out1 = tmp_path / "run1"
    out2 = tmp_path / "run2"
    assert run_cli(capsys, "sweep", "--config", str(cfg),
                   "--out", str(out1))[0] == 0
    assert run_cli(capsys, "sweep", "--config", str(cfg),
                   "--out", str(out2))[0] == 0
    a = (out1 / "results.csv").read_bytes()
    assert a == (out2 / "results.csv").read_bytes()
    lines = a.decode().splitlines()
    assert lines[0].startswith("beta,eb_n0_db,sir_db,estimator")
    assert len(lines) == 3  # header + em + perfect
    meta = (out1 / "meta.txt").read_text()
    assert "master_seed: 99" in meta
    assert "sha256" in meta


def test_sweep_seed_override_changes_output(tmp_path, capsys):
    cfg = tmp_path / "exp.cfg"
    cfg.write_text(CONFIG)
    out1 = tmp_path / "run1"
    out2 = tmp_path / "run2"
    run_cli(capsys, "sweep", "--config", str(cfg), "--out", str(out1))
    run_cli(capsys, "sweep", "--config", str(cfg), "--out", str(out2),
            "--seed", "100")
    assert (out1 / "results.csv").read_bytes() != \
        (out2 / "results.csv").read_bytes()


def test_config_parsing_details(tmp_path):
    cfg = tmp_path / "exp.cfg"
    cfg.write_text("order=16\nrician_k_db = 3  # converted from dB\n")
    parsed = cli.load_config(cfg)
    assert parsed.rician_k == pytest.approx(10 ** 0.3)
    cfg.write_text("bogus_key = 1\n")
    with pytest.raises(ValueError):
        cli.load_config(cfg)
    cfg.write_text("just a line\n")
    with pytest.raises(ValueError):
        cli.load_config(cfg)


def test_demo_em_runs(capsys):
    code, out, _ = run_cli(capsys, "demo-em", "--seed", "3",
                           "--eb-n0-db", "20")
    assert code == 0
    assert "converged: True" in out
    assert "truth:" in out
