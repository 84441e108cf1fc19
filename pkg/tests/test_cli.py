import asyncio
import csv
import json
import math

import pytest

from main import main
from src.cli.config_parser import Command, parse_config, read_config_file
from src.cli.runner import EXIT_DOMAIN, EXIT_IO, EXIT_OK, EXIT_USAGE, run
from src.core.errors import UsageError
from src.dqpt.zero_finder import ZSource


def _read_csv(path):
    with path.open(newline="", encoding="utf-8") as f:
        return list(csv.DictReader(f))


def _read_sidecar(path):
    return json.loads(path.with_suffix(".json").read_text(encoding="utf-8"))


def test_parse_config_flags(tmp_path):
    out = tmp_path / "scan.csv"
    config = parse_config(
        ["scan-l", "--beta", "0.7", "--t-min", "10", "--t-max", "20", "--n", "64", "-o", str(out)]
    )
    assert config.command == Command.SCAN_L
    assert config.beta == 0.7
    assert (config.t_min, config.t_max) == (10.0, 20.0)
    assert config.N == "64"
    assert config.n_fixed == 64
    assert config.output_path == out
    assert config.z_source == ZSource.AUTO


def test_parse_config_defaults(tmp_path):
    config = parse_config(["find-zeros", "--t-min", "10", "--t-max", "35", "-o", str(tmp_path / "z.csv")])
    assert config.N == "rs"
    assert config.threads >= 1
    assert config.secant is False
    assert config.tol == 1e-4


@pytest.mark.parametrize(
    "argv",
    [
        ["scan-l", "--t-min", "10", "--t-max", "20", "--n", "8", "--t-step", "0", "-o", "x.csv"],
        ["scan-l", "--t-min", "20", "--t-max", "10", "--n", "8", "-o", "x.csv"],
        ["scan-l", "--t-min", "10", "--t-max", "20", "--n", "8"],
        ["scan-l", "--t-min", "10", "--t-max", "20", "--n", "zero", "-o", "x.csv"],
        ["verify-prep", "--n", "rs", "-o", "x.csv"],
        ["free-energy", "--n", "64", "-o", "x.csv"],
        ["no-such-command", "-o", "x.csv"],
        ["scan-l", "--unknown", "1", "-o", "x.csv"],
        ["complexity", "--t", "100", "--estimation", "guess", "-o", "x.csv"],
    ],
)
def test_parse_config_rejects(argv):
    with pytest.raises(UsageError):
        parse_config(argv)


def test_config_file_with_flag_override(tmp_path):
    config_path = tmp_path / "run.conf"
    config_path.write_text("# free energy run\nbeta=0.3\nt=14.13\nN=64\n", encoding="utf-8")
    config = parse_config(
        ["free-energy", "--config", str(config_path), "--beta", "0.5", "-o", str(tmp_path / "f.csv")]
    )
    assert config.beta == 0.5
    assert config.t == 14.13
    assert config.n_fixed == 64


def test_config_file_path_argument(tmp_path):
    config_path = tmp_path / "run.conf"
    config_path.write_text("t-min=10\nt-max=35\nz-source=reference\n", encoding="utf-8")
    config = parse_config(["find-zeros", "-o", str(tmp_path / "z.csv")], config_path=config_path)
    assert config.z_source == ZSource.REFERENCE
    assert config.t_min == 10.0


def test_config_file_errors(tmp_path):
    with pytest.raises(UsageError):
        read_config_file(tmp_path / "missing.conf")
    bad = tmp_path / "bad.conf"
    bad.write_text("gamma=1\n", encoding="utf-8")
    with pytest.raises(UsageError):
        read_config_file(bad)


def test_find_zeros_first_five(tmp_path, first_five_zeros, reference_zeros_path):
    out = tmp_path / "zeros.csv"
    config = parse_config([
        "find-zeros", "--t-min", "10", "--t-max", "35", "--t-step", "0.01", "--tol", "1e-4",
        "--reference", str(reference_zeros_path), "-o", str(out),
    ])
    assert run(config) == EXIT_OK

    rows = _read_csv(out)
    assert len(rows) == 5
    for row, expected in zip(rows, first_five_zeros):
        assert abs(float(row["t_star"]) - expected) <= 0.02
        assert abs(float(row["delta_t_if_reference"])) <= 1e-4
    assert [int(row["index_in_window"]) for row in rows] == list(range(5))

    sidecar = _read_sidecar(out)
    assert sidecar["command"] == "find-zeros"
    assert sidecar["rows"] == 5
    assert sidecar["results"]["source"] == "reference"
    assert sidecar["results"]["unmatched"] == 0
    assert sidecar["conventions"]["rounding"] == "nearest_even"
    assert "numpy" in sidecar["versions"]


def test_find_zeros_output_is_deterministic(tmp_path):
    argv = ["find-zeros", "--t-min", "420", "--t-max", "430", "--t-step", "0.02"]
    first = tmp_path / "a.csv"
    second = tmp_path / "b.csv"
    parallel = tmp_path / "c.csv"
    assert run(parse_config(argv + ["--threads", "1", "-o", str(first)])) == EXIT_OK
    assert run(parse_config(argv + ["--threads", "1", "-o", str(second)])) == EXIT_OK
    assert run(parse_config(argv + ["--threads", "3", "-o", str(parallel)])) == EXIT_OK
    assert first.read_bytes() == second.read_bytes() == parallel.read_bytes()


def test_scan_l_rows(tmp_path):
    out = tmp_path / "l.csv"
    config = parse_config(
        ["scan-l", "--beta", "0.5", "--t-min", "14", "--t-max", "15", "--t-step", "0.25", "--n", "256", "-o", str(out)]
    )
    assert run(config) == EXIT_OK
    rows = _read_csv(out)
    assert [float(row["t"]) for row in rows] == [14.0, 14.25, 14.5, 14.75, 15.0]
    assert list(rows[0]) == ["t", "beta", "N", "re", "im", "abs", "F1"]
    for row in rows:
        assert math.hypot(float(row["re"]), float(row["im"])) == pytest.approx(float(row["abs"]))


def test_scan_z_reports_source(tmp_path):
    out = tmp_path / "z.csv"
    config = parse_config(["scan-z", "--t-min", "20", "--t-max", "22", "--t-step", "0.5", "-o", str(out)])
    assert run(config) == EXIT_OK
    assert len(_read_csv(out)) == 5
    assert _read_sidecar(out)["results"]["source"] == "reference"


def test_scan_beta_grid(tmp_path):
    out = tmp_path / "beta.csv"
    config = parse_config(["scan-beta", "--t", "14.13", "--n", "1024", "-o", str(out)])
    assert run(config) == EXIT_OK
    rows = _read_csv(out)
    assert len(rows) == 17
    assert float(rows[0]["beta"]) == 0.1
    assert float(rows[-1]["beta"]) == 0.9
    assert "argmin_beta" in _read_sidecar(out)["results"]


def test_free_energy_at_zero(tmp_path):
    out = tmp_path / "f.csv"
    config = parse_config(["free-energy", "--beta", "0.5", "--t", "14.134725", "--n", "1024", "-o", str(out)])
    assert run(config) == EXIT_OK
    rows = _read_csv(out)
    assert [int(row["N"]) for row in rows] == [16, 32, 64, 128, 256, 512, 1024]
    results = _read_sidecar(out)["results"]
    assert results["at_zero"] is True
    assert results["F1_limit"] == pytest.approx(math.log(2.0))


def test_verify_prep_row(tmp_path):
    out = tmp_path / "prep.csv"
    config = parse_config(["verify-prep", "--n", "64", "--beta", "0.5", "--eps", "1e-3", "-o", str(out)])
    assert run(config) == EXIT_OK
    (row,) = _read_csv(out)
    assert float(row["distance"]) <= 1e-3
    assert float(row["success_prob"]) >= 0.5 - 1e-3 / 3
    assert int(row["gates"]) > 0
    assert "stage_distances" in _read_sidecar(out)["results"]


def test_verify_evolve_row(tmp_path):
    out = tmp_path / "evolve.csv"
    config = parse_config(["verify-evolve", "--n", "64", "--t", "14.13", "-o", str(out)])
    assert run(config) == EXIT_OK
    (row,) = _read_csv(out)
    assert float(row["max_phase_deviation"]) <= float(row["bound"])
    assert float(row["abs_error"]) <= 5e-3


def test_complexity_writes_only_sidecar(tmp_path):
    out = tmp_path / "cost.csv"
    config = parse_config(["complexity", "--beta", "0.5", "--t", "1000", "--delta", "0.01", "-o", str(out)])
    assert run(config) == EXIT_OK
    assert not out.exists()
    results = _read_sidecar(out)["results"]
    assert results["estimate"]["constants"] == "conventional"
    assert results["zero_region"]["inside"] is True


def test_domain_error_exit_code(tmp_path):
    config = parse_config(["verify-prep", "--n", "64", "--beta", "1.0", "-o", str(tmp_path / "p.csv")])
    assert run(config) == EXIT_DOMAIN


def test_riemann_siegel_below_two_pi_exit_code(tmp_path):
    config = parse_config(["scan-g", "--t-min", "1", "--t-max", "10", "-o", str(tmp_path / "g.csv")])
    assert run(config) == EXIT_DOMAIN


def test_output_under_regular_file(tmp_path):
    blocker = tmp_path / "file.txt"
    blocker.write_text("x", encoding="utf-8")
    config = parse_config(
        ["scan-l", "--t-min", "10", "--t-max", "11", "--t-step", "0.5", "--n", "8", "-o", str(blocker / "out.csv")]
    )
    assert run(config) == EXIT_IO


def test_missing_reference_file(tmp_path):
    config = parse_config([
        "find-zeros", "--t-min", "10", "--t-max", "16", "--t-step", "0.05",
        "--reference", str(tmp_path / "missing.txt"), "-o", str(tmp_path / "z.csv"),
    ])
    assert run(config) == EXIT_IO


def test_main_reports_usage_error():
    assert asyncio.run(main(["scan-l", "--t-min", "10"])) == EXIT_USAGE
