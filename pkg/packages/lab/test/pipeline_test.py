import csv
import json

import pytest
from thzlab.config import PipelineConfig
from thzlab.errors import ConfigError, StageInputMissing
from thzlab.manifest import read_manifest
from thzlab.pipeline import exit_status_for, require_inputs, run_pipeline
from thzsounder.errors import NumericError, ScenarioValidationError
from thzsounder.synth import StorageError


def _digests(manifest):
    return [(artifact.path, artifact.sha256) for artifact in manifest.artifacts]


def test_full_run(make_config):
    config = make_config()
    result = run_pipeline(config)
    assert result.exit_status == 0, result.error
    manifest = result.manifest
    assert manifest is not None
    paths = manifest.paths()
    for expected in (
        "cir/140.thzc",
        "cir/220.calibration.thzc",
        "truth/140.json",
        "postproc/140/mpcs.csv",
        "postproc/140/clusters.csv",
        "postproc/220/drift_model.json",
        "stats/140/positions.csv",
        "stats/220/summary.json",
        "stats/140/scattering.csv",
        "plots/140/drift_curve.csv",
        "plots/220/power_delay_profile.csv",
        "plots/140/delay_angle_map.csv",
        "report/comparison.csv",
        "report/comparison.txt",
        "report/band_constants.csv",
        "report/band_comparison.csv",
        "report/band_comparison.txt",
    ):
        assert expected in paths
    assert paths == sorted(paths)
    assert not any(path.startswith("logs/") or path == "manifest.json" for path in paths)
    assert read_manifest(config.output.manifest) == manifest
    assert manifest.stages == ("synth", "postproc", "characterize", "report")
    assert manifest.bands == ("140", "220")

    summary = json.loads((config.output.root / "stats" / "140" / "summary.json").read_text(encoding="utf-8"))
    assert summary["position_count"] == 3
    assert summary["los_count"] == 3
    assert summary["nlos_means"] == {}
    assert summary["ci_best"]["ple"] == pytest.approx(2.0, abs=0.3)

    drift = json.loads((config.output.root / "postproc" / "140" / "drift_model.json").read_text(encoding="utf-8"))
    assert drift["slope"] * 3600e9 == pytest.approx(20.0, abs=1.0)


def test_band_constants(make_config):
    config = make_config(bands="140")
    assert run_pipeline(config).exit_status == 0
    with (config.output.root / "report" / "band_constants.csv").open(encoding="utf-8", newline="") as file:
        (row,) = list(csv.DictReader(file))
    assert row["band"] == "140"
    assert float(row["delay_bin_ns"]) == pytest.approx(0.651, rel=1e-3)
    assert float(row["max_delay_ns"]) == pytest.approx(1332.7, rel=1e-3)
    assert float(row["max_path_length_m"]) == pytest.approx(399.8, rel=1e-3)
    assert not (config.output.root / "report" / "band_comparison.csv").exists()


def test_synth_only(make_config):
    config = make_config(stage_to="synth")
    result = run_pipeline(config)
    assert result.exit_status == 0
    assert result.manifest is not None
    assert set(result.manifest.paths()) == {
        "cir/140.thzc",
        "cir/140.calibration.thzc",
        "truth/140.json",
        "cir/220.thzc",
        "cir/220.calibration.thzc",
        "truth/220.json",
    }


def test_cir_csv_is_optional(make_config):
    config = make_config(stage_to="synth", bands="220", cir_csv=True)
    result = run_pipeline(config)
    assert result.manifest is not None
    assert "cir/220.csv" in result.manifest.paths()


def test_postproc_needs_synth(make_config):
    result = run_pipeline(make_config(stage_from="postproc", stage_to="postproc"))
    assert result.exit_status == 2
    assert isinstance(result.error, StageInputMissing)
    assert result.error.stage == "postproc"


def test_stages_resume_from_existing_artifacts(make_config):
    synth = run_pipeline(make_config(stage_to="synth"))
    assert synth.exit_status == 0
    rest = run_pipeline(make_config(stage_from="postproc"))
    assert rest.exit_status == 0
    assert rest.manifest is not None
    assert synth.manifest is not None
    assert rest.manifest.digest("cir/140.thzc") == synth.manifest.digest("cir/140.thzc")


def test_runs_are_deterministic(make_config):
    first = run_pipeline(make_config("first", workers=1))
    second = run_pipeline(make_config("second", workers=4))
    assert first.manifest is not None
    assert second.manifest is not None
    assert _digests(first.manifest) == _digests(second.manifest)


def test_seed_changes_artifacts(make_config):
    first = run_pipeline(make_config("first", stage_to="synth", bands="140"))
    second = run_pipeline(make_config("second", stage_to="synth", bands="140", seed=4))
    assert first.manifest is not None
    assert second.manifest is not None
    assert second.manifest.seed == 4
    assert first.manifest.digest("cir/140.thzc") != second.manifest.digest("cir/140.thzc")


def test_configuration_errors(make_config, write_scenario, tmp_path):
    backwards = run_pipeline(make_config(stage_from="report", stage_to="synth"))
    assert backwards.exit_status == 1
    assert isinstance(backwards.error, ConfigError)

    missing = run_pipeline(make_config(scenario_path=tmp_path / "nowhere.json"))
    assert missing.exit_status == 1

    single_band = write_scenario("single.json", bands=(140e9,))
    no_band = run_pipeline(make_config(scenario_path=single_band, bands="220"))
    assert no_band.exit_status == 1

    broken = tmp_path / "broken.json"
    broken.write_text('{"room": {}}', encoding="utf-8")
    assert run_pipeline(make_config(scenario_path=broken)).exit_status == 1


def test_config_stage_range():
    assert PipelineConfig(stage_from="postproc", stage_to="characterize").stages() == ["postproc", "characterize"]
    with pytest.raises(ConfigError):
        PipelineConfig(stage_from="characterize", stage_to="synth").stages()
    with pytest.raises(ConfigError):
        PipelineConfig(workers=0).validate()


def test_require_inputs(tmp_path):
    present = tmp_path / "present.csv"
    present.write_text("x\n", encoding="utf-8")
    assert require_inputs("report", present).unwrap() == (present,)
    missing = require_inputs("report", present, tmp_path / "absent.csv").unwrap_err()
    assert missing.path == tmp_path / "absent.csv"


def test_exit_status_mapping(tmp_path):
    assert exit_status_for(StageInputMissing("report", tmp_path)) == 2
    assert exit_status_for(StorageError("truncated")) == 2
    assert exit_status_for(ScenarioValidationError("rx", "empty")) == 1
    assert exit_status_for(ConfigError("bad")) == 1
    assert exit_status_for(NumericError("singular")) == 3
    assert exit_status_for(FloatingPointError()) == 3
