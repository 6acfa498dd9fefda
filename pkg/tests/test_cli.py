"""CLI artifact tests: schemas, determinism, exit codes."""

import json
import math

import pytest

from magspec import cli


def run(args):
    return cli.main(args)


@pytest.fixture(scope="module")
def csv_lines(tmp_path_factory):
    out = tmp_path_factory.mktemp("disp")
    code = run(
        ["--out", str(out), "dispersion", "--nu", "0.25", "--m", "0..2",
         "--bmax", "4", "--points", "40"]
    )
    assert code == 0
    return (out / "dispersion.csv").read_text().splitlines()


class TestDispersionCommand:

    def test_header(self, csv_lines):
        assert csv_lines[0] == "nu,gamma,m,level,b,mu,err"

    def test_row_count(self, csv_lines):
        assert len(csv_lines) == 1 + 3 * 40

    def test_crossing_location_in_data(self, csv_lines):
        rows = [line.split(",") for line in csv_lines[1:]]
        curve = [(float(r[4]), float(r[5])) for r in rows if r[2] == "1"]
        gaps = [(b, mu - b) for b, mu in curve]
        crossing = None
        for (b1, g1), (b2, g2) in zip(gaps, gaps[1:]):
            if g1 * g2 <= 0.0 and g1 != g2:
                crossing = b1 + (b2 - b1) * g1 / (g1 - g2)
        assert crossing is not None
        assert abs(crossing - 1.5) < 1e-3

    def test_determinism(self, tmp_path):
        texts = []
        for tag in ("a", "b"):
            out = tmp_path / tag
            out.mkdir()
            run(
                ["--out", str(out), "dispersion", "--nu", "0.25", "--m", "1..1",
                 "--bmax", "2", "--points", "10"]
            )
            texts.append((out / "dispersion.csv").read_bytes())
        assert texts[0] == texts[1]

    def test_thread_cap_does_not_change_output(self, tmp_path, monkeypatch):
        texts = []
        for tag, workers in (("serial", "1"), ("threads", "4")):
            out = tmp_path / tag
            out.mkdir()
            monkeypatch.setenv("MAGSPEC_THREADS", workers)
            run(
                ["--out", str(out), "dispersion", "--nu", "-0.25", "--m", "0..2",
                 "--bmax", "2", "--points", "8"]
            )
            texts.append((out / "dispersion.csv").read_bytes())
        assert texts[0] == texts[1]


def test_degennes_json(tmp_path):
    assert run(["--out", str(tmp_path), "degennes", "--gamma", "0"]) == 0
    doc = json.loads((tmp_path / "degennes.json").read_text())
    assert abs(doc["theta"] - doc["xi"] ** 2) < 1e-8
    assert abs(doc["moment1"]) < 1e-8


def test_strong_command(tmp_path):
    code = run(["--out", str(tmp_path), "strong", "--nu", "0.3", "--b", "100", "200"])
    assert code == 0
    lines = (tmp_path / "strong.csv").read_text().splitlines()
    assert lines[0].startswith("b,nu,gamma,mu_numeric,term_theta_b")
    row = dict(zip(lines[0].split(","), lines[1].split(",")))
    assert abs(float(row["residual"])) < 0.05
    total = (
        float(row["term_theta_b"]) + float(row["term_c_sqrtb"]) + float(row["term_osc"])
    )
    assert total == pytest.approx(float(row["total"]), rel=1e-15)


def test_weak_command(tmp_path):
    code = run(
        ["--out", str(tmp_path), "weak", "--nu", "0.25", "--b", "0.002", "0.005"]
    )
    assert code == 0
    lines = (tmp_path / "weak.csv").read_text().splitlines()
    row = dict(zip(lines[0].split(","), lines[1].split(",")))
    assert abs(float(row["mu_fd"]) - float(row["mu_implicit_u"])) < 1e-6
    assert float(row["lower"]) <= float(row["mu_fd"]) <= float(row["upper"])


def test_invalid_configuration_exit_code(tmp_path):
    assert run(["--out", str(tmp_path), "dispersion", "--nu", "0.25", "--m", "0..1",
                "--bmax", "-3", "--points", "10"]) == 2


def test_unknown_command_exit_code(tmp_path):
    assert run(["--out", str(tmp_path), "nonsense"]) == 2


def test_float_format_is_full_precision():
    x = 1.0 / 3.0
    assert float(cli.format_float(x)) == x
    assert cli.format_float(2) == "2"
