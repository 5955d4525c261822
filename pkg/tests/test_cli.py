import json
import subprocess
import sys

import pytest

from univhub.cli import ConfigError, main, parse_config


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, models):
    p = tmp_path / "models.json"
    p.write_text(json.dumps(models))
    return str(p)


HUB = {"up": {"m": 2, "n": 0, "N": [1]}, "down": {"m": 2, "n": 0, "N": [1]}, "U": 2.0, "L": 2}


def test_verify_default_zoo(capsys):
    code, out, _ = run(["verify", "--suite", "theorem1"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["pass"]
    assert len(rep["config"]) == 7
    assert "timings" not in rep


def test_reports_reproducible(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["verify", "--suite", "theorem1", "--out", str(a)]) == 0
    assert main(["verify", "--suite", "theorem1", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_timings_opt_in(capsys):
    code, out, _ = run(["fock", "--nmax", "1", "--timings"], capsys)
    assert code == 0 and "timings" in json.loads(out)


def test_spectrum_standard_hubbard(tmp_path, capsys):
    code, out, _ = run(["spectrum", "--model", write(tmp_path, [HUB])], capsys)
    rep = json.loads(out)
    assert code == 0
    (data,) = rep["data"].values()
    assert data["dim"] == 16 and len(data["eigenvalues"]) == 16
    assert [c["name"].split(":")[-1] for c in rep["checks"]] == ["hermitian"]


def test_bad_index_message(tmp_path, capsys):
    bad = {"up": {"m": 2, "n": 0, "N": [5]}}
    code, _, err = run(["verify", "--model", write(tmp_path, [bad])], capsys)
    assert code == 2
    assert "up.N: index 5 outside [1, 2]" in err


def test_dimension_cap(tmp_path, capsys):
    big = dict(HUB, L=12)
    code, _, err = run(["spectrum", "--model", write(tmp_path, [big])], capsys)
    assert code == 2 and "L:" in err


def test_missing_file(capsys):
    code, _, err = run(["verify", "--model", "/nonexistent.json"], capsys)
    assert code == 2 and "cannot read" in err


@pytest.mark.parametrize(
    "raw,msg",
    [
        ({"down": {}}, "up: missing"),
        ({"up": {"m": 2, "N": [1]}, "colour": 1}, "unknown field"),
        ({"up": {"m": 2, "N": [1, 1]}}, "repeated"),
        ({"up": {"m": 2, "N": [1]}, "L": 1}, "L: must be"),
        ({"up": {"m": 2, "N": [1]}, "twist": [[1, 1, 0.0, 0.0]]}, "modulus"),
        ({"up": {"m": 2, "N": [1]}, "twist_down": [[1, 1, 1.0, 0.0]]}, "needs a down"),
    ],
)
def test_config_errors(raw, msg):
    with pytest.raises(ConfigError, match=msg):
        parse_config(raw)


def test_twisted_config_verifies(tmp_path, capsys):
    cfg = {"up": {"m": 2, "n": 1, "N": [1]}, "twist": [[1, 1, 1.0, 0.5], [1, 2, 2.0, 0.0]], "L": 3}
    code, out, _ = run(["verify", "--suite", "twist", "--model", write(tmp_path, [cfg])], capsys)
    assert code == 0 and json.loads(out)["pass"]


def test_perturb(tmp_path, capsys):
    cfg = dict(HUB, L=4)
    code, out, _ = run(["perturb", "--model", write(tmp_path, [cfg])], capsys)
    assert code == 0 and json.loads(out)["pass"]


def test_bae_default(capsys):
    code, out, _ = run(["bae"], capsys)
    assert code == 0 and json.loads(out)["pass"]


def test_fock_checks(capsys):
    code, out, _ = run(["fock", "--nmax", "1", "3"], capsys)
    rep = json.loads(out)
    assert code == 0
    assert any(c["mode"] == "min" and c["pass"] for c in rep["checks"])


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "univhub", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and "univhub" in res.stdout
