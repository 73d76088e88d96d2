import csv
import io
import json
import math

import pytest

from sse_sim import bounds
from sse_sim.cli import main
from sse_sim.harness import (
    BOUNDS_COLUMNS,
    CONCENTRATION_COLUMNS,
    SIMULATION_COLUMNS,
    ConfigError,
    SweepConfig,
    csv_text,
    fig2_preset,
    run_bounds_sweep,
    run_concentration_check,
    run_simulation_sweep,
)


def parse_csv(text):
    rows = list(csv.DictReader(io.StringIO(text)))
    return rows


def bounds_config(**overrides):
    config = SweepConfig(c_values=[0.5, 1.0], delta_values=[0.0, 0.2], lbar=1.75)
    for key, value in overrides.items():
        setattr(config, key, value)
    return config


def small_sim_config(**overrides):
    config = SweepConfig(n_values=[2048], c_values=[1.0], delta_values=[0.2],
                         lbar=1.75, trials=6, master_seed=42)
    for key, value in overrides.items():
        setattr(config, key, value)
    return config


class TestBoundsSweep:
    def test_row_count_is_grid_product(self):
        config = bounds_config(c_values=[0.1 * i for i in range(1, 101)],
                               delta_values=[0.0, 0.2, 0.3])
        assert len(run_bounds_sweep(config)) == 300

    def test_known_row_values(self):
        rows = run_bounds_sweep(bounds_config())
        row = next(r for r in rows if r["c"] == 1.0 and r["delta"] == 0.2)
        assert row["delta_e"] == pytest.approx(0.081450, abs=1e-6)
        assert row["converse"] == pytest.approx(0.370418, abs=1e-6)

    def test_achievable_defined_at_delta_03(self):
        rows = run_bounds_sweep(bounds_config(c_values=[1.0], delta_values=[0.3]))
        assert not math.isnan(rows[0]["achievable"])  # 1.75 * 0.7 > 1

    def test_undefined_achievable_becomes_na_cell(self):
        rows = run_bounds_sweep(bounds_config(c_values=[1.0], delta_values=[0.5]))
        text = csv_text(BOUNDS_COLUMNS, rows)
        parsed = parse_csv(text)[0]
        assert parsed["achievable"] == "NA"
        assert parsed["gap"] == "NA"
        assert parsed["converse"] != "NA"

    def test_analytic_columns_reproducible_from_row_parameters(self):
        rows = run_bounds_sweep(bounds_config())
        for row in rows:
            c, delta, lbar = row["c"], row["delta"], row["lbar"]
            assert row["delta_e"] == bounds.analytic_delta_e(c, delta)
            assert row["converse"] == bounds.converse_bound(c, delta, lbar)
            assert row["converse_raw"] == bounds.converse_bound_raw(c, delta, lbar)
            achievable = bounds.achievable_rate(c, delta, lbar)
            if achievable is None:
                assert math.isnan(row["achievable"])
            else:
                assert row["achievable"] == achievable

    def test_deterministic(self):
        a = csv_text(BOUNDS_COLUMNS, run_bounds_sweep(bounds_config()))
        b = csv_text(BOUNDS_COLUMNS, run_bounds_sweep(bounds_config()))
        assert a == b


class TestFig2Preset:
    def test_grid_shape(self):
        config = fig2_preset(SweepConfig())
        assert config.lbar == 1.75
        assert config.delta_values == [0.0, 0.2, 0.3]
        assert len(config.c_values) == 200
        assert config.c_values[0] == pytest.approx(0.05)
        assert config.c_values[-1] == pytest.approx(10.0)
        assert len(run_bounds_sweep(config)) == 600


class TestSimulationSweep:
    def test_single_trial_leaves_se_columns_empty(self):
        rows = run_simulation_sweep(small_sim_config(trials=1))
        text = csv_text(SIMULATION_COLUMNS, rows)
        parsed = parse_csv(text)[0]
        assert parsed["se_phi"] == ""
        assert parsed["se_k_prime"] == ""
        assert parsed["d_tail_se"] == ""
        assert parsed["mean_phi"] != ""

    def test_rerun_is_byte_identical(self):
        a = csv_text(SIMULATION_COLUMNS, run_simulation_sweep(small_sim_config()))
        b = csv_text(SIMULATION_COLUMNS, run_simulation_sweep(small_sim_config()))
        assert a == b

    def test_worker_count_does_not_change_bytes(self):
        serial = csv_text(SIMULATION_COLUMNS, run_simulation_sweep(small_sim_config(workers=1)))
        pooled = csv_text(SIMULATION_COLUMNS, run_simulation_sweep(small_sim_config(workers=3)))
        assert serial == pooled

    def test_different_seed_changes_results(self):
        a = csv_text(SIMULATION_COLUMNS, run_simulation_sweep(small_sim_config()))
        b = csv_text(SIMULATION_COLUMNS, run_simulation_sweep(small_sim_config(master_seed=43)))
        assert a != b

    def test_analytic_targets_match_bounds_module(self):
        rows = run_simulation_sweep(small_sim_config())
        row = rows[0]
        c_eff = row["c_effective"]
        assert row["exp_phi"] == bounds.expected_coverage(c_eff)
        assert row["exp_phi_v"] == bounds.expected_visible_coverage(c_eff, 0.2)
        assert row["exp_delta_e"] == bounds.analytic_delta_e(c_eff, 0.2)
        assert row["exp_scaled_k_prime"] == pytest.approx(
            (c_eff / 1.75) * math.exp(-c_eff)
        )

    def test_rejects_invalid_grid(self):
        with pytest.raises(ConfigError):
            run_simulation_sweep(small_sim_config(n_values=[]))
        with pytest.raises(ConfigError):
            run_simulation_sweep(small_sim_config(trials=0))
        with pytest.raises(ConfigError):
            run_simulation_sweep(small_sim_config(n_values=[16], lbar=8.0))
        with pytest.raises(ConfigError):
            run_simulation_sweep(small_sim_config(merge_mode="sloppy"))
        with pytest.raises(ConfigError):
            run_simulation_sweep(small_sim_config(alpha="sometimes"))


class TestConcentrationCheck:
    def test_emits_bin_and_dmax_rows(self):
        rows = run_concentration_check(small_sim_config(j_max=8))
        kinds = {row["kind"] for row in rows}
        assert kinds == {"bin", "dmax"}
        bins = [r for r in rows if r["kind"] == "bin"]
        assert {r["k"] for r in bins} == set(range(1, 9))
        dmax = [r for r in rows if r["kind"] == "dmax"][0]
        c_eff = dmax["c_effective"]
        assert dmax["alpha"] == pytest.approx(2 * (-1 / math.log2(1 - math.exp(-c_eff))))
        assert dmax["d_threshold"] == pytest.approx(dmax["alpha"] * math.log2(2048))
        assert dmax["degenerate_trials"] == 0

    def test_explicit_alpha_is_respected(self):
        rows = run_concentration_check(small_sim_config(alpha=5.0, j_max=8))
        dmax = [r for r in rows if r["kind"] == "dmax"][0]
        assert dmax["alpha"] == 5.0

    def test_pooled_frequencies_sum_to_one(self):
        rows = run_concentration_check(small_sim_config(j_max=12))
        bins = [r for r in rows if r["kind"] == "bin"]
        assert sum(r["pooled_q_hat"] for r in bins) == pytest.approx(1.0)

    def test_deterministic(self):
        a = csv_text(CONCENTRATION_COLUMNS, run_concentration_check(small_sim_config()))
        b = csv_text(CONCENTRATION_COLUMNS, run_concentration_check(small_sim_config()))
        assert a == b


class TestCli:
    def run(self, argv, capsys):
        code = main(argv)
        out, err = capsys.readouterr()
        return code, out, err

    def test_bounds_to_stdout(self, capsys):
        code, out, err = self.run(
            ["bounds", "--c", "1.0", "--delta", "0.2", "--lbar", "1.75"], capsys)
        assert code == 0
        rows = parse_csv(out)
        assert rows[0]["converse"] == "0.370418"
        assert rows[0]["delta_e"] == "0.0814495"
        assert rows[0]["schema_version"] == "1"

    def test_c_grid_flags(self, capsys):
        code, out, _ = self.run(
            ["bounds", "--c-min", "0.5", "--c-max", "1.0", "--c-steps", "3",
             "--delta", "0.0"], capsys)
        assert code == 0
        assert [r["c"] for r in parse_csv(out)] == ["0.5", "0.75", "1"]

    def test_simulate_writes_file(self, tmp_path, capsys):
        out_path = tmp_path / "sim.csv"
        code, _, err = self.run(
            ["simulate", "--n", "1024", "--c", "1.0", "--delta", "0.1",
             "--trials", "3", "--seed", "7", "--out", str(out_path)], capsys)
        assert code == 0, err
        rows = parse_csv(out_path.read_text())
        assert len(rows) == 1
        assert rows[0]["n"] == "1024"
        assert rows[0]["trials"] == "3"

    def test_identical_invocations_are_byte_identical(self, tmp_path, capsys):
        args = ["simulate", "--n", "1024", "--c", "1.0", "--delta", "0.1",
                "--trials", "3", "--seed", "7"]
        a = self.run(args + ["--out", str(tmp_path / "a.csv")], capsys)
        b = self.run(args + ["--out", str(tmp_path / "b.csv"), "--workers", "2"], capsys)
        assert a[0] == 0 and b[0] == 0
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()

    def test_config_file_with_flag_override(self, tmp_path, capsys):
        config_path = tmp_path / "run.json"
        config_path.write_text(json.dumps({
            "n_values": [1024], "c_values": [1.0], "delta_values": [0.1],
            "trials": 3, "master_seed": 7, "lbar": 1.5,
        }))
        code, out, _ = self.run(
            ["simulate", "--config", str(config_path), "--lbar", "1.75"], capsys)
        assert code == 0
        assert parse_csv(out)[0]["lbar"] == "1.75"

    def test_unknown_config_key_fails(self, tmp_path, capsys):
        config_path = tmp_path / "run.json"
        config_path.write_text(json.dumps({"coverage": 2.0}))
        code, _, err = self.run(["bounds", "--config", str(config_path)], capsys)
        assert code == 2
        assert "error:" in err

    def test_invalid_configuration_fails_with_diagnostic(self, capsys):
        code, _, err = self.run(["simulate", "--n", "16", "--lbar", "8.0"], capsys)
        assert code == 2
        assert "error:" in err

    def test_unwritable_output_fails(self, tmp_path, capsys):
        code, _, err = self.run(
            ["bounds", "--c", "1.0", "--delta", "0.0",
             "--out", str(tmp_path / "no" / "dir.csv")], capsys)
        assert code == 2
        assert "error:" in err

    def test_mismatched_c_range_flags_fail(self, capsys):
        code, _, err = self.run(["bounds", "--c-min", "0.5"], capsys)
        assert code == 2
        assert "error:" in err

    def test_preset_fig2(self, capsys):
        code, out, _ = self.run(["bounds", "--preset", "fig2"], capsys)
        assert code == 0
        rows = parse_csv(out)
        assert len(rows) == 600
        assert {r["delta"] for r in rows} == {"0", "0.2", "0.3"}
