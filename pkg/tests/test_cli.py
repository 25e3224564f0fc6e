"""Config validation, the three subcommands, exit codes and output files."""

import json
import os

import pytest

import musicopt.cli as cli
from musicopt.errors import ConfigError
from musicopt.cli import (
    FIGURE_RECIPES,
    cmd_figures,
    cmd_run,
    cmd_validate,
    parse_config,
)


def small_quadratic_doc(out_dir, T=60):
    return {
        "problem": {
            "kind": "quadratic",
            "source": {"kind": "synthetic", "p": 3, "m": 3, "seed": 2},
            "mu": 1e-3,
        },
        "network": {"n": 8, "avg_degree": 3.0, "seed": 5, "rule": "metropolis"},
        "algorithms": [
            {"label": "atc", "kind": "atc", "E": 1, "beta": 0.0,
             "schedule": {"kind": "constant", "alpha0": 0.02}},
            {"label": "music E=2", "kind": "inexact_music", "E": 2, "beta": 0.0,
             "schedule": {"kind": "constant", "alpha0": 0.02}},
        ],
        "run": {"T": T, "target_error": 0.5, "output_dir": out_dir},
    }


def write_json(tmp_path, doc, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


LETTER_LIKE = "\n".join(
    f"{2 if k % 2 == 0 else 4} 1:{0.1 * k:.2f} 2:{0.05 * (k + 1):.2f} "
    f"3:{0.3 + 0.01 * k:.2f} 4:{0.7 - 0.01 * k:.2f}"
    for k in range(30)
) + "\n7 1:0.5 2:0.5 3:0.5 4:0.5\n"


class TestParseConfig:
    def test_valid_document(self, tmp_path):
        spec = parse_config(small_quadratic_doc(str(tmp_path)))
        assert spec.network.n == 8
        assert [label for label, _ in spec.algorithms] == ["atc", "music E=2"]
        assert spec.algorithms[1][1].E == 2
        assert spec.run.target_error == 0.5

    def test_target_error_optional(self, tmp_path):
        doc = small_quadratic_doc(str(tmp_path))
        del doc["run"]["target_error"]
        assert parse_config(doc).run.target_error is None

    def test_unknown_keys_rejected_everywhere(self, tmp_path):
        doc = small_quadratic_doc(str(tmp_path))
        doc["extra"] = 1
        doc["network"]["color"] = "blue"
        doc["algorithms"][0]["schedule"]["warmup"] = 5
        with pytest.raises(ConfigError) as err:
            parse_config(doc)
        msgs = err.value.problems
        assert any("top.extra" in m for m in msgs)
        assert any("network.color" in m for m in msgs)
        assert any("algorithms[0].schedule.warmup" in m for m in msgs)

    def test_all_errors_reported_at_once(self, tmp_path):
        doc = small_quadratic_doc(str(tmp_path))
        doc["problem"]["mu"] = -1.0
        doc["network"]["n"] = 1
        doc["algorithms"][0]["E"] = 0
        with pytest.raises(ConfigError) as err:
            parse_config(doc)
        msgs = err.value.problems
        assert len(msgs) >= 3
        assert any("problem.mu" in m for m in msgs)
        assert any("network.n" in m for m in msgs)
        assert any("algorithms[0].E" in m for m in msgs)

    def test_unknown_algorithm_kind_names_field(self, tmp_path):
        doc = small_quadratic_doc(str(tmp_path))
        doc["algorithms"][0]["kind"] = "sgd"
        with pytest.raises(ConfigError, match=r"algorithms\[0\].kind"):
            parse_config(doc)

    def test_single_update_kind_with_large_E(self, tmp_path):
        doc = small_quadratic_doc(str(tmp_path))
        doc["algorithms"][0]["E"] = 4
        with pytest.raises(ConfigError, match="E must be 1"):
            parse_config(doc)

    def test_duplicate_labels_rejected(self, tmp_path):
        doc = small_quadratic_doc(str(tmp_path))
        doc["algorithms"][1]["label"] = "atc"
        with pytest.raises(ConfigError, match="duplicate label"):
            parse_config(doc)

    def test_diminishing_requires_delta(self, tmp_path):
        doc = small_quadratic_doc(str(tmp_path))
        doc["algorithms"][0]["schedule"] = {"kind": "diminishing", "alpha0": 0.01}
        with pytest.raises(ConfigError, match="delta"):
            parse_config(doc)

    def test_beta_range_checked_for_corrected_kinds(self, tmp_path):
        doc = small_quadratic_doc(str(tmp_path))
        doc["algorithms"][1] = {
            "label": "em", "kind": "exact_music", "E": 2, "beta": 2.0,
            "schedule": {"kind": "constant", "alpha0": 0.01},
        }
        with pytest.raises(ConfigError, match="beta"):
            parse_config(doc)

    def test_libsvm_source_fields(self, tmp_path):
        doc = small_quadratic_doc(str(tmp_path))
        doc["problem"]["source"] = {
            "kind": "libsvm", "path": "x.scale", "label_pos": 2,
            "label_neg": 2, "m_per_agent": 4, "seed": 0,
        }
        with pytest.raises(ConfigError, match="must differ"):
            parse_config(doc)


class TestCmdValidate:
    def test_valid_prints_ok(self, tmp_path, capsys):
        path = write_json(tmp_path, small_quadratic_doc(str(tmp_path)))
        assert cmd_validate(path) == 0
        assert capsys.readouterr().out.strip() == "ok"

    def test_invalid_lists_every_problem(self, tmp_path, capsys):
        doc = small_quadratic_doc(str(tmp_path))
        doc["network"]["rule"] = "uniform"
        doc["run"]["T"] = 0
        path = write_json(tmp_path, doc)
        assert cmd_validate(path) == 1
        err = capsys.readouterr().err
        assert "network.rule" in err and "run.T" in err

    def test_missing_file_is_io_failure(self, tmp_path):
        assert cmd_validate(str(tmp_path / "absent.json")) == 2

    def test_malformed_json_is_validation_failure(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        assert cmd_validate(str(path)) == 1
        assert "JSON" in capsys.readouterr().err

    def test_stability_warning_does_not_fail(self, tmp_path, capsys):
        doc = small_quadratic_doc(str(tmp_path))
        doc["algorithms"].append({
            "label": "em_wild", "kind": "exact_music", "E": 8, "beta": 1.0,
            "schedule": {"kind": "constant", "alpha0": 1e-4},
        })
        path = write_json(tmp_path, doc)
        assert cmd_validate(path) == 0
        out = capsys.readouterr().out
        assert "warning" in out and "em_wild" in out
        assert out.strip().endswith("ok")

    def test_step_size_past_precondition_warns(self, tmp_path, capsys):
        doc = small_quadratic_doc(str(tmp_path))
        doc["algorithms"].append({
            "label": "em_big_step", "kind": "exact_music", "E": 2, "beta": 1.0,
            "schedule": {"kind": "constant", "alpha0": 10.0},
        })
        path = write_json(tmp_path, doc)
        assert cmd_validate(path) == 0
        assert "em_big_step" in capsys.readouterr().out


class TestCmdRun:
    def test_writes_traces_and_summary(self, tmp_path, capsys):
        out = tmp_path / "out"
        path = write_json(tmp_path, small_quadratic_doc(str(out)))
        assert cmd_run(path) == 0
        names = sorted(os.listdir(out))
        assert names == ["atc.csv", "music_E_2.csv", "summary.csv"]
        summary = (out / "summary.csv").read_text().splitlines()
        assert summary[0] == "label,final_rel_error,rounds_to_target,fitted_rate,status"
        assert summary[1].startswith("atc,") and summary[1].endswith(",converged")
        assert summary[2].startswith("music E=2,")
        # target 0.5 is reached by both at these settings
        assert all(row.split(",")[2] != "" for row in summary[1:])

    def test_byte_identical_reruns(self, tmp_path):
        out1, out2 = tmp_path / "a", tmp_path / "b"
        p1 = write_json(tmp_path, small_quadratic_doc(str(out1)), "c1.json")
        p2 = write_json(tmp_path, small_quadratic_doc(str(out2)), "c2.json")
        assert cmd_run(p1) == 0 and cmd_run(p2) == 0
        for name in ("atc.csv", "music_E_2.csv", "summary.csv"):
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes()

    def test_env_var_overrides_output_dir(self, tmp_path, monkeypatch):
        configured = tmp_path / "configured"
        actual = tmp_path / "actual"
        monkeypatch.setenv(cli.OUTPUT_DIR_ENV, str(actual))
        path = write_json(tmp_path, small_quadratic_doc(str(configured)))
        assert cmd_run(path) == 0
        assert not configured.exists()
        assert (actual / "summary.csv").exists()

    def test_divergence_recorded_not_fatal(self, tmp_path):
        out = tmp_path / "out"
        doc = small_quadratic_doc(str(out))
        doc["algorithms"].append({
            "label": "wild", "kind": "atc", "E": 1, "beta": 0.0,
            "schedule": {"kind": "constant", "alpha0": 1e6},
        })
        path = write_json(tmp_path, doc)
        assert cmd_run(path) == 0
        rows = (out / "summary.csv").read_text().splitlines()
        wild = [r for r in rows if r.startswith("wild,")]
        assert len(wild) == 1 and "diverged(at " in wild[0]

    def test_missing_data_file_is_io_failure(self, tmp_path, capsys):
        doc = small_quadratic_doc(str(tmp_path / "out"))
        doc["problem"]["source"] = {
            "kind": "libsvm", "path": str(tmp_path / "absent.scale"),
            "label_pos": 2, "label_neg": 4, "m_per_agent": 3, "seed": 0,
        }
        path = write_json(tmp_path, doc)
        assert cmd_run(path) == 2

    def test_quadratic_from_libsvm_file(self, tmp_path):
        data = tmp_path / "letterish.scale"
        data.write_text(LETTER_LIKE)
        out = tmp_path / "out"
        doc = small_quadratic_doc(str(out))
        doc["problem"]["source"] = {
            "kind": "libsvm", "path": str(data),
            "label_pos": 2, "label_neg": 4, "m_per_agent": 3, "seed": 0,
        }
        doc["network"]["n"] = 5
        path = write_json(tmp_path, doc)
        assert cmd_run(path) == 0
        assert (out / "summary.csv").exists()

    def test_logistic_from_libsvm_file(self, tmp_path, monkeypatch):
        monkeypatch.setattr(cli, "X_STAR_ITERS", 20_000)  # keep the test quick
        data = tmp_path / "letterish.scale"
        data.write_text(LETTER_LIKE)
        out = tmp_path / "out"
        doc = small_quadratic_doc(str(out))
        doc["problem"] = {
            "kind": "logistic",
            "source": {
                "kind": "libsvm", "path": str(data),
                "label_pos": 2, "label_neg": 4, "m_per_agent": 3, "seed": 0,
            },
            "mu": 1e-2,
        }
        doc["network"]["n"] = 5
        doc["algorithms"] = [{
            "label": "exact_music_E3", "kind": "exact_music", "E": 3, "beta": 1.0,
            "schedule": {"kind": "constant", "alpha0": 0.05},
        }]
        doc["run"]["T"] = 300
        path = write_json(tmp_path, doc)
        assert cmd_run(path) == 0
        rows = (out / "summary.csv").read_text().splitlines()
        assert rows[1].startswith("exact_music_E3,")


class TestCmdFigures:
    def test_every_recipe_parses(self):
        for name, make in FIGURE_RECIPES.items():
            spec = parse_config(make())
            assert spec.run.T >= 1, name

    def test_unknown_recipe_rejected(self, tmp_path, capsys):
        path = write_json(tmp_path, {"run": {"recipe": "fig99", "output_dir": "x"}})
        assert cmd_figures(path) == 1
        assert "run.recipe" in capsys.readouterr().err

    def test_fig2a_with_desk_scale_overrides(self, tmp_path):
        out = tmp_path / "fig"
        doc = {
            "problem": {"source": {"p": 3, "m": 3}},
            "network": {"n": 10},
            "run": {"recipe": "fig2a", "T": 40, "output_dir": str(out)},
        }
        path = write_json(tmp_path, doc)
        assert cmd_figures(path) == 0
        names = sorted(os.listdir(out))
        assert names == [
            "inexact_music_E1.csv",
            "inexact_music_E2.csv",
            "inexact_music_E4.csv",
            "inexact_music_E8.csv",
            "summary.csv",
        ]

    def test_letter_recipe_without_file_is_io_failure(self, tmp_path):
        doc = {"run": {"recipe": "fig6", "T": 10,
                       "output_dir": str(tmp_path / "o")}}
        path = write_json(tmp_path, doc)
        assert cmd_figures(path) == 2


class TestMain:
    def test_run_subcommand(self, tmp_path):
        out = tmp_path / "out"
        path = write_json(tmp_path, small_quadratic_doc(str(out), T=30))
        assert cli.main(["run", path]) == 0

    def test_validate_subcommand(self, tmp_path):
        path = write_json(tmp_path, small_quadratic_doc(str(tmp_path)))
        assert cli.main(["validate", path]) == 0
