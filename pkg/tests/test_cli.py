import math
import subprocess
import sys

import pytest

from catbreeder.cli import main, parse_z, read_config, UsageError


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def fields(text):
    return dict(line.split(": ", 1) for line in text.strip().splitlines() if ": " in line)


@pytest.mark.parametrize("text,value", [
    ("0.14", 0.14 * math.pi), ("0.14pi", 0.14 * math.pi), ("0.5 PI", 0.5 * math.pi),
    ("0.44rad", 0.44), ("0", 0.0),
])
def test_parse_z(text, value):
    assert parse_z(text) == pytest.approx(value, abs=1e-15)


def test_parse_z_bad():
    with pytest.raises(UsageError):
        parse_z("fourteen")


def test_breed_default_point(capsys):
    code, out, _ = run(capsys, "breed")
    assert code == 0
    f = fields(out)
    assert float(f["alpha3"]) == pytest.approx(2.10, abs=0.02)
    assert float(f["probability"]) == pytest.approx(0.395, abs=0.005)
    assert f["case"] == "I"


def test_breed_zero_length(capsys):
    code, out, _ = run(capsys, "breed", "--z", "0")
    assert code == 0
    f = fields(out)
    assert float(f["probability"]) == 0
    assert f["alpha3"] == ""


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# fig 5 setup\nparity1 = even\nparity2 = even\nz = 0.2\n")
    _, out, _ = run(capsys, "breed", "--config", str(cfg))
    assert fields(out)["case"] == "III"
    _, out, _ = run(capsys, "breed", "--config", str(cfg), "--parity1", "odd", "--parity2", "odd")
    assert fields(out)["case"] == "I"
    assert float(fields(out)["z_pi"]) == pytest.approx(0.2)


def test_config_errors(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    with pytest.raises(SystemExit) as info:
        main(["breed", "--config", str(cfg)])
    assert info.value.code == 2
    cfg.write_text("no equals sign\n")
    with pytest.raises(UsageError):
        read_config(cfg)


def test_usage_errors_exit_two(capsys):
    for argv in (["breed", "--alpha0", "-1"], ["sweep", "--z-min", "0.3", "--z-max", "0.2"],
                 ["breed", "--z", "soon"], ["optimize", "--objective", "threshold"], ["nonsense"]):
        with pytest.raises(SystemExit) as info:
            main(argv)
        assert info.value.code == 2


def test_sweep_to_file_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert main(["sweep", "--z-min", "0.05", "--z-max", "0.3", "--steps", "11", "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().splitlines()
    assert lines[0].startswith("# ")
    data = [l for l in lines if not l.startswith("#")]
    assert data[0].split(",")[0] == "z_pi"
    assert len(data) == 12


def test_wigner_terms(tmp_path, capsys):
    out = tmp_path / "w.csv"
    assert main(["wigner", "--term", "1:0", "--count", "5", "--x-min", "-1", "--x-max", "1",
                 "--p-min", "-1", "--p-max", "1", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "x,p,w"
    assert len(lines) == 26
    center = [l for l in lines[1:] if l.startswith("0,0,")]
    assert float(center[0].split(",")[2]) == pytest.approx(2 / math.pi, abs=1e-15)


def test_wigner_cat_and_heralded(capsys):
    code, out, _ = run(capsys, "wigner", "--cat", "1.7", "--cat-parity", "odd", "--count", "3")
    assert code == 0 and out.splitlines()[0] == "x,p,w"
    code, out, _ = run(capsys, "wigner", "--z", "0.14", "--count", "3")
    assert code == 0 and len(out.splitlines()) == 10


def test_wigner_bad_term():
    with pytest.raises(SystemExit) as info:
        main(["wigner", "--term", "oops"])
    assert info.value.code == 2


def test_optimize(capsys):
    code, out, _ = run(capsys, "optimize", "--objective", "threshold", "--threshold", "2.0")
    assert code == 0
    f = fields(out)
    assert float(f["alpha3"]) >= 2 and float(f["probability"]) > 0.395
    code, _, err = run(capsys, "optimize", "--objective", "threshold", "--threshold", "2.5")
    assert code == 1
    assert "best achievable alpha3" in err


def test_reproduce_cli(tmp_path, capsys):
    code, out, _ = run(capsys, "reproduce", "figA", "--out", str(tmp_path))
    assert code == 0
    assert (tmp_path / "figA_fits.csv").exists()


def test_verify_exit_codes(capsys):
    code, out, _ = run(capsys, "verify", "--samples", "2")
    assert code == 0
    assert out.strip().splitlines()[-1].endswith("checks passed")
    code, out, _ = run(capsys, "verify", "--samples", "2", "--tamper-sign")
    assert code == 3
    assert "FAIL" in out


def test_runtime_error_exit_one(tmp_path, capsys):
    code, _, err = run(capsys, "breed", "--out", str(tmp_path / "missing" / "x.txt"))
    assert code == 1
    assert err.startswith("error:")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "catbreeder.cli", "breed", "--z", "0.2"],
                          capture_output=True, text=True, timeout=60)
    assert proc.returncode == 0
    assert "alpha3:" in proc.stdout
