import json
import re
from fractions import Fraction

import numpy as np
import pandas as pd
import pytest

from cli.config import ConfigError, build_config
from cli.records import format_cell, to_serializable, verify_file_written
from cli.runner import EXIT_FAIL, EXIT_PASS, EXIT_PRECONDITION, EXIT_USAGE, main
from exponents import beta_lower
from exponents.rational import decimal_string, format_rational


def read_summary(out):
    with open(out / "summary.json") as f:
        return json.load(f)


def test_exponent_table_matches_formulas(tmp_path):
    out = tmp_path / "exp"
    assert main(["exponents", "--d", "3", "--table", "1/2:3:1/4", "--out", str(out)]) == EXIT_PASS
    frame = pd.read_csv(out / "results.csv", dtype=str, keep_default_na=False)
    assert len(frame) == 11
    for _, row in frame.iterrows():
        alpha = Fraction(row["alpha_pq"])
        assert row["beta_lower_pq"] == format_rational(beta_lower(3, alpha))
        assert row["beta_lower"] == decimal_string(beta_lower(3, alpha))
    assert set(frame["gamma_broad"]) == {""}
    assert verify_file_written(out / "summary.json")
    assert verify_file_written(out / "run_log.json")


def test_exponent_csv_is_reproducible(tmp_path):
    args = ["exponents", "--d", "5", "--table", "1/10:5:1/10", "--compare-prior"]
    assert main(args + ["--out", str(tmp_path / "a")]) == EXIT_PASS
    assert main(args + ["--out", str(tmp_path / "b")]) == EXIT_PASS
    first = (tmp_path / "a" / "results.csv").read_bytes()
    assert first == (tmp_path / "b" / "results.csv").read_bytes()
    assert first.endswith(b"\n") and b"\r\n" not in first


def test_json_format_embeds_rows(tmp_path):
    out = tmp_path / "json"
    assert main(["exponents", "--d", "3", "--alpha", "2", "--format", "json", "--out", str(out)]) == EXIT_PASS
    assert not (out / "results.csv").exists()
    summary = read_summary(out)
    assert summary["config_echo"]["format"] == "json"
    row = summary["rows"][0]
    assert row["alpha"] == "2/1"
    assert row["beta_lower"] == format_rational(beta_lower(3, 2))


def test_point_mass_decay_run(tmp_path):
    out = tmp_path / "decay"
    code = main(["decay", "--recipe", "point", "--d", "2", "--R-max", "64", "--count", "5", "--out", str(out)])
    assert code == EXIT_PASS
    summary = read_summary(out)
    assert summary["pass"] is True
    assert summary["expected_beta"] == "0/1"
    assert [record["name"] for record in summary["records"]] == ["fitted_beta", "frostman"]
    frame = pd.read_csv(out / "results.csv")
    assert list(frame.columns) == ["R", "average", "log_R", "log_average"]
    assert len(frame) == 5


def test_decay_recipe_string_matches_separate_flags(tmp_path):
    compact = tmp_path / "compact"
    spelled = tmp_path / "spelled"
    first = main(["decay", "--d", "2", "--recipe", "cantor:2,1/4,4", "--rmin", "4", "--rmax", "64",
                  "--count", "6", "--quad-nodes", "4096", "--out", str(compact)])
    second = main(["decay", "--d", "2", "--recipe", "cantor", "--b", "2", "--rho", "0.25", "--n", "4",
                   "--R-min", "4", "--R-max", "64", "--count", "6", "--nodes", "4096", "--out", str(spelled)])
    assert first == second
    assert first in (EXIT_PASS, EXIT_FAIL)
    assert (compact / "results.csv").read_bytes() == (spelled / "results.csv").read_bytes()
    summary = read_summary(compact)
    assert summary["claimed_alpha"] == pytest.approx(1.0)
    assert summary["bound_beta"] == pytest.approx(0.5)


def test_claimed_alpha_drives_decay_and_frostman_checks(tmp_path):
    out = tmp_path / "claimed"
    code = main(["decay", "--d", "2", "--recipe", "point", "--alpha-claimed", "1", "--rmax", "16",
                 "--count", "4", "--out", str(out)])
    assert code == EXIT_FAIL
    summary = read_summary(out)
    assert summary["claimed_alpha"] == 1.0
    assert summary["bound_beta"] == pytest.approx(0.5)
    assert {record["name"]: record["pass"] for record in summary["records"]} == {
        "fitted_beta": False,
        "frostman": False,
    }


def test_claimed_alpha_above_dimension_is_a_precondition_error(tmp_path):
    out = tmp_path / "too-big"
    code = main(["decay", "--d", "2", "--recipe", "point", "--alpha-claimed", "5/2", "--out", str(out)])
    assert code == EXIT_PRECONDITION
    assert read_summary(out)["error"]["parameter"] == "alpha_claimed"


@pytest.mark.parametrize("recipe", ["cantor:2,0.25", "cantor:two,0.25,3", "moran"])
def test_malformed_decay_recipe_is_a_usage_error(tmp_path, recipe):
    assert main(["decay", "--d", "2", "--recipe", recipe, "--out", str(tmp_path)]) == EXIT_USAGE


def test_weight_from_measure_run(tmp_path):
    out = tmp_path / "from-measure"
    code = main(["weights", "verify", "--recipe", "from-measure", "--measure", "cantor:2,0.25,3", "--d", "2",
                 "--R", "16", "--alpha", "1", "--constant", "8", "--radii", "1,2,4", "--out", str(out)])
    assert code == EXIT_PASS
    summary = read_summary(out)
    assert summary["weight_integral"] == pytest.approx(16.0, rel=1e-9)
    frame = pd.read_csv(out / "results.csv", dtype=str)
    assert frame["radius"].tolist() == ["1", "2", "4"]


def test_weight_from_measure_needs_measure(tmp_path):
    code = main(["weights", "verify", "--recipe", "from-measure", "--d", "2", "--R", "16", "--alpha", "1",
                 "--constant", "8", "--out", str(tmp_path)])
    assert code == EXIT_USAGE


def test_malformed_weight_grid_exits_with_precondition(tmp_path):
    grid = tmp_path / "weight.bin"
    grid.write_bytes(np.asarray([2], dtype="<i8").tobytes() + np.asarray([0.0, 0.0], dtype="<f8").tobytes())
    out = tmp_path / "grid-run"
    code = main(["weights", "verify", "--grid", str(grid), "--alpha", "1", "--constant", "4", "--out", str(out)])
    assert code == EXIT_PRECONDITION
    assert read_summary(out)["error"]["parameter"] == "weight"


def test_weights_run_saves_grid(tmp_path):
    out = tmp_path / "weights"
    code = main(["weights", "verify", "--recipe", "uniform", "--d", "2", "--alpha", "2", "--constant", "4",
                 "--half-width", "8", "--radii", "1,2,4", "--save-grid", "--out", str(out)])
    assert code == EXIT_PASS
    assert (out / "weight.bin").exists()
    frame = pd.read_csv(out / "results.csv", dtype=str)
    assert frame["radius"].tolist() == ["1", "2", "4"]
    assert set(frame["pass"]) == {"true"}


def test_missing_parameter_is_a_usage_error(tmp_path, capsys):
    assert main(["decay", "--d", "2", "--out", str(tmp_path)]) == EXIT_USAGE
    assert "recipe not defined in config" in capsys.readouterr().err
    assert not (tmp_path / "summary.json").exists()


def test_unknown_subcommand_is_a_usage_error():
    assert main(["restrict"]) == EXIT_USAGE


def test_config_kind_mismatch(tmp_path):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"kind": "exponents", "params": {"d": 3}}))
    assert main(["decay", "--config", str(config)]) == EXIT_USAGE


def test_config_file_values_and_overrides(tmp_path):
    out = tmp_path / "from-file"
    config = tmp_path / "run.json"
    config.write_text(json.dumps({
        "kind": "decay",
        "seed": 11,
        "out": str(out),
        "params": {"recipe": "point", "d": 2, "count": 4, "R_max": 16},
    }))
    assert main(["decay", "--config", str(config), "--count", "6"]) == EXIT_PASS
    echo = read_summary(out)["config_echo"]
    assert echo["seed"] == 11
    assert echo["params"]["count"] == 6
    assert echo["params"]["R_max"] == 16


def test_precondition_violation_names_parameter(tmp_path, capsys):
    out = tmp_path / "bad"
    code = main(["exponents", "--d", "3", "--table", "1:3:1", "--check-recursion", "--out", str(out)])
    assert code == EXIT_PRECONDITION
    assert "(d)" in capsys.readouterr().err
    summary = read_summary(out)
    assert summary["pass"] is False
    assert summary["error"]["parameter"] == "d"
    assert (out / "run_log.json").exists()


def test_decay_beyond_atom_scale_is_a_precondition_error(tmp_path):
    out = tmp_path / "deep"
    code = main(["decay", "--recipe", "cantor", "--d", "2", "--b", "2", "--rho", "0.25", "--n", "3",
                 "--R-max", "64", "--out", str(out)])
    assert code == EXIT_PRECONDITION
    assert read_summary(out)["error"]["parameter"] == "R_max"


def test_plot_of_empty_csv_fails_cleanly(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    svg = tmp_path / "plot.svg"
    assert main(["plot", "--csv", str(empty), "--plot", "decay", "--output", str(svg), "--out", str(tmp_path)]) == EXIT_USAGE
    assert not svg.exists()


def test_plot_of_header_only_csv_fails_cleanly(tmp_path):
    header = tmp_path / "header.csv"
    header.write_text("R,average,log_R,log_average\n")
    svg = tmp_path / "plot.svg"
    assert main(["plot", "--csv", str(header), "--plot", "decay", "--output", str(svg), "--out", str(tmp_path)]) == EXIT_USAGE
    assert not svg.exists()


def test_decay_plot_slope_matches_fit(tmp_path):
    run = tmp_path / "decay"
    code = main(["decay", "--recipe", "cantor", "--d", "2", "--b", "2", "--rho", "0.25", "--n", "4",
                 "--R-min", "4", "--R-max", "64", "--count", "6", "--out", str(run)])
    assert code in (EXIT_PASS, EXIT_FAIL)
    fitted = read_summary(run)["fitted_beta"]

    svg = tmp_path / "decay.svg"
    plot_out = tmp_path / "plot"
    assert main(["plot", "--csv", str(run / "results.csv"), "--plot", "decay", "--output", str(svg),
                 "--out", str(plot_out)]) == EXIT_PASS
    match = re.search(r'class="fit" data-slope="([^"]+)"', svg.read_text())
    assert match is not None
    assert float(match.group(1)) == pytest.approx(fitted, abs=1e-6)
    assert read_summary(plot_out)["fitted_beta"] == pytest.approx(fitted, abs=1e-6)


def test_exponent_plot_marks_breakpoints(tmp_path):
    run = tmp_path / "exp4"
    assert main(["exponents", "--d", "4", "--table", "1/4:4:1/8", "--out", str(run)]) == EXIT_PASS
    svg = tmp_path / "exp4.svg"
    assert main(["plot", "--csv", str(run / "results.csv"), "--plot", "exponents", "--output", str(svg),
                 "--out", str(tmp_path / "plot")]) == EXIT_PASS
    text = svg.read_text()
    assert text.count('class="breakpoint"') >= 1
    assert 'data-name="gamma_broad"' in text
    assert read_summary(tmp_path / "plot")["breakpoints"]


def test_wavepacket_run_reconstructs(tmp_path):
    out = tmp_path / "wp"
    code = main(["wavepackets", "--R", "64", "--delta", "0.25", "--f", "random-smooth", "--seed", "3", "--out", str(out)])
    assert code == EXIT_PASS
    summary = read_summary(out)
    assert summary["tiles"] > 0
    assert summary["records"][0]["name"] == "reconstruction"
    frame = pd.read_csv(out / "results.csv", dtype=str, keep_default_na=False)
    assert list(frame.columns) == ["tile", "mass", "verdict"]
    assert frame["tile"].str.startswith("cap[").all()
    support = summary["essential_support"]
    assert support["tile"] in set(frame["tile"])
    assert 0.0 < support["share"] <= 1.0


def test_wavepacket_run_reports_concentration(tmp_path):
    out = tmp_path / "wp-variety"
    code = main(["wavepackets", "--R", "64", "--delta", "0.25", "--f", "random-smooth", "--seed", "3",
                 "--variety", "x2 - x1^2", "--E", "4", "--threads", "2", "--out", str(out)])
    assert code == EXIT_PASS
    summary = read_summary(out)
    assert [record["name"] for record in summary["records"]] == ["reconstruction", "concentration"]
    concentration = summary["records"][1]
    assert 0.0 <= concentration["value"] <= 1.0
    assert 0.5 <= concentration["accounted"] <= 2.0
    assert concentration["E"] == 4.0
    assert sum(summary["verdict_counts"].values()) == summary["tiles"]
    frame = pd.read_csv(out / "results.csv", dtype=str, keep_default_na=False)
    assert set(frame["verdict"]) <= {"tangent", "not_tangent", "inconclusive"}
    assert (frame["verdict"] != "").all()


@pytest.mark.parametrize(
    "kind, params, message",
    [
        ("extend-scaling", {"d": 4, "p": 4, "alpha": 2, "weight": "uniform", "f": "bump", "R": "8,16"}, "d = 2 or d = 3"),
        ("exponents", {"d": "3"}, "integer"),
        ("weights", {"action": "verify", "alpha": 2}, "constant not defined"),
    ],
)
def test_build_config_validation(kind, params, message):
    with pytest.raises(ConfigError, match=message):
        build_config(kind, None, {}, params)


def test_build_config_rejects_bad_seed():
    with pytest.raises(ConfigError):
        build_config("exponents", {"seed": -1}, {}, {"d": 3})


def test_artifact_cells():
    assert format_cell(True) == "true"
    assert format_cell(None) == ""
    assert format_cell(0.1 + 0.2) == "0.3"
    assert format_cell(Fraction(3, 4)) == "3/4"
    assert to_serializable({"ratio": float("nan")}) == {"ratio": None}
