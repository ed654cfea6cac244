import math

import numpy as np
import pytest
import yaml

from qscramble.cli import main
from qscramble.scenario import (ScenarioError, build_model, load_scenario,
                                parse_angle, parse_scenario, run_scenario,
                                shipped_scenarios, sweep)


def dicke_config(**overrides):
    raw = {
        "name": "unit_test_dicke",
        "model": "dicke",
        "dynamics": "gksl",
        "params": {"omega0": 2.0, "omega_c": 2.0, "coupling": 1.0,
                   "n_atoms": 2, "n_max": 3, "gamma": 0.05, "kappa": 0.05,
                   "temp_a": 0.0, "temp_b": 0.0},
        "observables": ["otoc_open"],
        "times": {"start": 0.0, "stop": 2.0, "points": 5},
        "rng_seed": 3,
        "output": "unit_test_dicke.csv",
    }
    raw.update(overrides)
    return raw


def ising_thermo_config(**overrides):
    raw = {
        "name": "unit_test_ising",
        "model": "ising",
        "dynamics": "unitary",
        "params": {"n_sites": 3, "field": 0.5, "coupling": 0.5,
                   "theta": "7pi/16", "split": 1},
        "observables": ["otoc_unitary", "entropy_production",
                        "correlation_entropy"],
        "times": {"start": 0.0, "stop": 4.0, "points": 6},
        "output": "unit_test_ising.csv",
    }
    raw.update(overrides)
    return raw


class TestParseAngle:
    @pytest.mark.parametrize("token,expected", [
        (0.5, 0.5),
        (2, 2.0),
        ("pi", math.pi),
        ("pi/2", math.pi / 2),
        ("7pi/16", 7 * math.pi / 16),
        ("0.5pi", math.pi / 2),
    ])
    def test_accepted_forms(self, token, expected):
        assert abs(parse_angle(token) - expected) < 1e-15

    @pytest.mark.parametrize("token", ["two pi", "pi/", "x", None, [1]])
    def test_rejected_forms(self, token):
        with pytest.raises(ScenarioError):
            parse_angle(token)


class TestParseScenario:
    def test_valid_config(self):
        config = parse_scenario(dicke_config())
        assert config.model == "dicke"
        assert config.observables == ("otoc_open",)
        assert config.times.points == 5

    def test_missing_model(self):
        raw = dicke_config()
        del raw["model"]
        with pytest.raises(ScenarioError, match="model"):
            parse_scenario(raw)

    def test_unknown_observable(self):
        with pytest.raises(ScenarioError, match="observables"):
            parse_scenario(dicke_config(observables=["otoc_fancy"]))

    def test_observable_dynamics_compatibility(self):
        with pytest.raises(ScenarioError, match="unitary"):
            parse_scenario(dicke_config(observables=["otoc_unitary"]))
        with pytest.raises(ScenarioError, match="gksl"):
            parse_scenario(dicke_config(dynamics="unitary",
                                        observables=["otoc_open"]))

    def test_zero_length_grid_rejected(self):
        with pytest.raises(ScenarioError, match="times"):
            parse_scenario(dicke_config(times={"start": 0.0, "stop": 0.0,
                                               "points": 5}))
        with pytest.raises(ScenarioError, match="points"):
            parse_scenario(dicke_config(times={"start": 0.0, "stop": 1.0,
                                               "points": 0}))

    def test_gksl_entropy_needs_temperature(self):
        raw = dicke_config(observables=["entropy_production"])
        with pytest.raises(ScenarioError, match="gibbs_temperature"):
            parse_scenario(raw)

    def test_bad_theta_string(self):
        raw = ising_thermo_config()
        raw["params"]["theta"] = "sideways"
        with pytest.raises(ScenarioError, match="theta"):
            parse_scenario(raw)


class TestShippedScenarios:
    EXPECTED = {
        "dicke_coupling_sweep", "dicke_temperature_sweep_weak",
        "dicke_temperature_sweep_strong", "dicke_dissipation_sweep",
        "dicke_haar_mc", "dicke_unitary_thermo", "dicke_gksl_thermo",
        "tc_unitary_thermo", "ising_tilt_sweep",
        "ising_boundary_baths_equal", "ising_boundary_baths_hot",
        "ising_operator_entanglement", "ising_bipartition_1_3",
        "ising_bipartition_2_2", "ising_thermo", "ising_weak_coupling_thermo",
    }

    def test_expected_set_is_shipped(self):
        assert set(shipped_scenarios()) == self.EXPECTED

    def test_all_parse_and_build(self):
        for name in shipped_scenarios():
            config = load_scenario(name)
            assert config.description
            model = build_model(config)
            assert model.space.d >= 4

    def test_unknown_reference(self):
        with pytest.raises(ScenarioError):
            load_scenario("no_such_scenario")


class TestRunScenario:
    def test_csv_schema(self, tmp_path):
        config = parse_scenario(dicke_config())
        table, path = run_scenario(config, out_dir=tmp_path, timestamp=False)
        assert table.columns == ["t", "otoc_open"]
        lines = path.read_text().splitlines()
        meta = [ln for ln in lines if ln.startswith("#")]
        assert any("config" in ln for ln in meta)
        header_idx = len(meta)
        assert lines[header_idx] == "t,otoc_open"
        assert len(lines) == header_idx + 1 + 5
        first_row = [float(x) for x in lines[header_idx + 1].split(",")]
        assert first_row[0] == 0.0
        assert abs(first_row[1]) < 1e-10

    def test_byte_identical_reruns(self, tmp_path):
        config = parse_scenario(dicke_config(observables=["otoc_open",
                                                          "otoc_haar_mc"],
                                             n_pairs=20))
        _, path_a = run_scenario(config, out_dir=tmp_path / "a", timestamp=False)
        _, path_b = run_scenario(config, out_dir=tmp_path / "b", timestamp=False)
        assert path_a.read_bytes() == path_b.read_bytes()

    def test_seed_changes_mc_column(self, tmp_path):
        config = parse_scenario(dicke_config(observables=["otoc_haar_mc"],
                                             n_pairs=20))
        table_a, _ = run_scenario(config, out_dir=tmp_path, seed=1, timestamp=False)
        table_b, _ = run_scenario(config, out_dir=tmp_path, seed=2, timestamp=False)
        col_a = table_a.column("otoc_haar_mc")
        col_b = table_b.column("otoc_haar_mc")
        assert not np.array_equal(col_a[1:], col_b[1:])

    def test_thermo_emits_sum_column(self, tmp_path):
        config = parse_scenario(ising_thermo_config())
        table, _ = run_scenario(config, out_dir=tmp_path, timestamp=False)
        assert table.columns == ["t", "otoc_unitary", "entropy_production",
                                 "correlation_entropy", "entropy_sum"]
        total = table.column("entropy_production") + table.column("correlation_entropy")
        assert np.allclose(total, table.column("entropy_sum"), atol=1e-14)

    def test_gksl_thermo_scenario(self, tmp_path):
        raw = dicke_config(observables=["otoc_open", "entropy_production"],
                           gibbs_temperature=2.0)
        raw["params"]["temp_a"] = raw["params"]["temp_b"] = 2.0
        table, _ = run_scenario(parse_scenario(raw), out_dir=tmp_path,
                                timestamp=False)
        sigma = table.column("entropy_production")
        assert abs(sigma[0]) < 1e-10
        assert sigma[-1] > 0.0


class TestSweep:
    def test_coupling_sweep_writes_one_csv_per_value(self, tmp_path):
        config = parse_scenario(dicke_config())
        results = sweep(config, "coupling", [0.1, 0.5, 1.0, 1.3],
                        out_dir=tmp_path, timestamp=False)
        assert len(results) == 4
        for value, outcome in results:
            assert not isinstance(outcome, Exception)
            assert outcome.exists()
            assert f"coupling={value}" in outcome.name

    def test_theta_axis_accepts_pi_tokens(self, tmp_path):
        config = parse_scenario(ising_thermo_config(observables=["otoc_unitary"]))
        results = sweep(config, "theta", ["0", "pi/4", "7pi/16", "pi/2"],
                        out_dir=tmp_path, timestamp=False)
        paths = [p for _, p in results]
        assert all(not isinstance(p, Exception) for p in paths)
        assert any("7pi-16" in p.name for p in paths)

    def test_temperature_alias_sets_both_baths(self, tmp_path):
        config = parse_scenario(dicke_config())
        results = sweep(config, "temperature", [0.0, 1.0], out_dir=tmp_path,
                        timestamp=False)
        _, path = results[1]
        meta = [ln for ln in path.read_text().splitlines() if "config" in ln][0]
        assert '"temp_a": 1.0' in meta and '"temp_b": 1.0' in meta

    def test_dissipation_alias(self, tmp_path):
        config = parse_scenario(dicke_config())
        results = sweep(config, "dissipation", [0.0, 0.05], out_dir=tmp_path,
                        timestamp=False)
        _, path = results[0]
        meta = [ln for ln in path.read_text().splitlines() if "config" in ln][0]
        assert '"gamma": 0.0' in meta and '"kappa": 0.0' in meta

    def test_errors_collected_not_raised(self, tmp_path):
        config = parse_scenario(dicke_config())
        results = sweep(config, "n_max", [3, 1], out_dir=tmp_path,
                        timestamp=False)
        assert not isinstance(results[0][1], Exception)
        assert isinstance(results[1][1], Exception)

    def test_unknown_axis(self, tmp_path):
        config = parse_scenario(dicke_config())
        results = sweep(config, "flux_capacitor", [1.0], out_dir=tmp_path)
        assert isinstance(results[0][1], ScenarioError)


class TestCli:
    def test_run_exit_codes(self, tmp_path):
        scenario_path = tmp_path / "s.yaml"
        scenario_path.write_text(yaml.safe_dump(dicke_config()))
        assert main(["run", str(scenario_path), "--out", str(tmp_path),
                     "--no-timestamp"]) == 0
        assert (tmp_path / "unit_test_dicke.csv").exists()
        assert main(["run", str(tmp_path / "missing.yaml")]) == 1

    def test_validation_failure_is_exit_one(self, tmp_path):
        bad = dicke_config(observables=["otoc_unitary"])  # needs unitary dynamics
        scenario_path = tmp_path / "bad.yaml"
        scenario_path.write_text(yaml.safe_dump(bad))
        assert main(["run", str(scenario_path)]) == 1

    def test_sweep_command(self, tmp_path):
        scenario_path = tmp_path / "s.yaml"
        scenario_path.write_text(yaml.safe_dump(dicke_config()))
        code = main(["sweep", str(scenario_path), "--axis", "coupling=0.5,1.0",
                     "--out", str(tmp_path), "--no-timestamp"])
        assert code == 0
        assert len(list(tmp_path.glob("*coupling=*.csv"))) == 2

    def test_list_scenarios(self, capsys):
        assert main(["list-scenarios"]) == 0
        out = capsys.readouterr().out
        assert "dicke_coupling_sweep" in out
        assert "ising_thermo" in out

    def test_check_command(self, capsys):
        assert main(["check"]) == 0
        out = capsys.readouterr().out
        assert "[ok]" in out and "[FAIL]" not in out


class TestFockConvergenceHook:
    def test_reports_finite_cutoff_sensitivity(self):
        from qscramble.checks import fock_convergence
        delta = fock_convergence(coupling=0.5, t_max=3.0, points=7)
        # the bipartite OTOC depends on d_B explicitly, so doubling the cutoff
        # shifts the curve by a finite amount; the hook reports it
        assert 0.0 < delta < 1.0


class TestBoundaryBathTemperatures:
    def test_hot_bath_lowers_the_otoc(self, tmp_path):
        # same chain, boundary baths at (1,1) vs (1,5): the hotter environment
        # suppresses the OTOC over the window
        means = {}
        for name, temps in (("equal", [1.0, 1.0]), ("hot", [1.0, 5.0])):
            raw = {
                "name": f"bb_{name}", "model": "ising", "dynamics": "gksl",
                "params": {"n_sites": 5, "field": 1.0, "coupling": 1.0,
                           "theta": "7pi/16", "split": 2, "gamma": 0.05,
                           "bath_topology": "boundary", "temperatures": temps},
                "observables": ["otoc_open"],
                "times": {"start": 0.0, "stop": 12.0, "points": 10},
                "output": f"bb_{name}.csv",
            }
            table, _ = run_scenario(parse_scenario(raw), out_dir=tmp_path,
                                    timestamp=False)
            means[name] = table.column("otoc_open").mean()
        assert means["hot"] < means["equal"]
