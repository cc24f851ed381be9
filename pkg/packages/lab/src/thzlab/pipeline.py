from __future__ import annotations

import csv
from collections import defaultdict
from collections.abc import Callable, Mapping, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from loguru import logger
from result import Err, Ok, Result
from thzsounder.characterize import (
    ChannelStats,
    EnsembleSummary,
    ScatteringMatch,
    bundled_reference_path,
    characterize_position,
    compare_bands,
    compare_reference,
    format_band_comparison_text,
    format_comparison_text,
    load_reference_table,
    match_scatterers,
    summarize,
    write_band_comparison_csv,
    write_comparison_csv,
    write_stats_csv,
)
from thzsounder.constants import SCHEMA_VERSION
from thzsounder.errors import (
    DriftModelError,
    ScenarioError,
    SounderError,
    UnitMismatchError,
)
from thzsounder.postproc import (
    AntennaPair,
    ClusteringConfig,
    DriftModel,
    DriftSample,
    ExtractionConfig,
    PositionResult,
    calibrate_all,
    estimate_drift_samples,
    postprocess_position,
    read_clusters,
    select_reference_records,
    write_cluster_csv,
    write_drift_samples_csv,
    write_mpc_csv,
)
from thzsounder.scenario import Scenario, distance, load_scenario
from thzsounder.serializer import Serializer
from thzsounder.synth import (
    PropagationPath,
    StorageError,
    direct_connection_record,
    has_line_of_sight,
    read_cir_container,
    run_campaign,
    trace_all,
    write_cir_container,
    write_cir_csv,
)
from thzsounder.waveform import CirRecord

from thzlab.config import STAGES, PipelineConfig, Stage
from thzlab.directories import OutputLayout
from thzlab.errors import ConfigError, PipelineError, StageInputMissing
from thzlab.manifest import Manifest, build_manifest, write_manifest
from thzlab.plots import (
    DelayAngleMapData,
    DriftCurveData,
    PowerDelayProfileData,
    ScatteringBarsData,
    emit_plot_data,
)

JSON_SERIALIZER = Serializer.json()
DRIFT_MODEL_SERIALIZER = Serializer.model(DriftModel).to_json()
SUMMARY_SERIALIZER = Serializer.model(EnsembleSummary).to_json()
SCATTERING_CSV_COLUMNS = (
    "position_id",
    "cluster_id",
    "panel_id",
    "material",
    "delay_ns",
    "configured_loss_db",
    "recovered_loss_db",
    "error_db",
)
BAND_CONSTANTS_CSV_COLUMNS = (
    "band",
    "carrier_hz",
    "bandwidth_hz",
    "sample_count",
    "period_bins",
    "delay_bin_ns",
    "max_delay_ns",
    "max_path_length_m",
    "alias_free_delay_ns",
)
DEFAULT_REGULARIZATION = 1e-6


@dataclass(frozen=True, slots=True)
class PipelineResult:
    exit_status: int
    manifest: Manifest | None = None
    error: Exception | None = None


@dataclass(frozen=True, slots=True)
class StageContext:
    config: PipelineConfig
    scenario: Scenario
    layout: OutputLayout

    @property
    def regularization(self) -> float:
        return float(self.scenario.processing.get("regularization", DEFAULT_REGULARIZATION))

    def map[T, R](self, function: Callable[[T], R], items: Sequence[T]) -> list[R]:
        if self.config.workers == 1:
            return [function(item) for item in items]
        with ThreadPoolExecutor(max_workers=self.config.workers) as executor:
            return list(executor.map(function, items))


def require_inputs(stage: Stage, *paths: Path) -> Result[tuple[Path, ...], StageInputMissing]:
    for path in paths:
        if not path.is_file():
            return Err(StageInputMissing(stage, path))
    return Ok(paths)


def _inputs(stage: Stage, *paths: Path) -> tuple[Path, ...]:
    match require_inputs(stage, *paths):
        case Ok(found):
            return found
        case Err(missing):
            raise missing


def _by_position(records: Sequence[CirRecord]) -> dict[int, list[CirRecord]]:
    grouped: dict[int, list[CirRecord]] = defaultdict(list)
    for record in records:
        grouped[record.position_id].append(record)
    return grouped


def _read_calibrated(context: StageContext, stage: Stage, label: str) -> list[CirRecord]:
    cir_path, calibration_path = _inputs(
        stage, context.layout.cir(label), context.layout.calibration(label)
    )
    _, records = read_cir_container(cir_path)
    _, references = read_cir_container(calibration_path)
    if len(references) != 1:
        raise StorageError(f"{calibration_path} holds {len(references)} records, expected 1")
    return calibrate_all(records, references[0], regularization=context.regularization)


def _write_truth(path: Path, label: str, paths: Mapping[int, Sequence[PropagationPath]]) -> Path:
    return JSON_SERIALIZER.write(
        path,
        {
            "schema_version": SCHEMA_VERSION,
            "band": label,
            "paths": {
                str(rx_id): [path.to_json() for path in rx_paths]
                for rx_id, rx_paths in sorted(paths.items())
            },
        },
    )


def _read_truth(path: Path) -> dict[int, list[PropagationPath]]:
    data = JSON_SERIALIZER.read(path)
    try:
        return {
            int(rx_id): [PropagationPath.from_json(item) for item in items]
            for rx_id, items in data["paths"].items()
        }
    except (KeyError, TypeError, ValueError) as e:
        raise StorageError(f"Malformed path truth {path}: {e}") from e


def run_synth(context: StageContext, band: int) -> None:
    scenario = context.scenario
    band_config = scenario.bands[band]
    label = band_config.label
    records = run_campaign(scenario, band, workers=context.config.workers)
    write_cir_container(context.layout.cir(label), band_config, records)
    if context.config.cir_csv:
        write_cir_csv(context.layout.cir_csv(label), records)
    write_cir_container(
        context.layout.calibration(label), band_config, [direct_connection_record(scenario, band)]
    )
    _write_truth(context.layout.truth(label), label, trace_all(scenario, band))


def _fit_drift(
    label: str, records: Sequence[CirRecord], scenario: Scenario
) -> tuple[list[DriftSample], DriftModel | None]:
    samples = estimate_drift_samples(select_reference_records(records, scenario), scenario)
    try:
        model = DriftModel.fit(samples)
    except DriftModelError as e:
        logger.warning(f"{label} GHz: no drift correction applied: {e}")
        return samples, None
    logger.info(
        f"{label} GHz: drift {model.rate_ns_per_hour:.2f} ns/h from {len(samples)} LoS positions"
    )
    return samples, model


def run_postproc(context: StageContext, band: int) -> None:
    scenario = context.scenario
    label = scenario.bands[band].label
    layout = context.layout
    records = _read_calibrated(context, "postproc", label)
    samples, model = _fit_drift(label, records, scenario)
    write_drift_samples_csv(layout.postproc(label, "drift_samples.csv"), samples)
    if model is not None:
        DRIFT_MODEL_SERIALIZER.write(layout.postproc(label, "drift_model.json"), model)

    extraction = ExtractionConfig.from_overrides(scenario.processing)
    clustering = ClusteringConfig.from_overrides(scenario.processing)
    grouped = _by_position(records)

    def process(rx_id: int) -> PositionResult:
        return postprocess_position(
            grouped[rx_id],
            system_response=None,
            drift_model=model,
            antennas=AntennaPair.of(scenario, rx_id),
            extraction=extraction,
            clustering=clustering,
        )

    results = context.map(process, [rx.position_id for rx in scenario.rx_list if rx.position_id in grouped])
    clusters = [result.clusters for result in results]
    write_mpc_csv(layout.postproc(label, "mpcs.csv"), clusters)
    write_cluster_csv(layout.postproc(label, "clusters.csv"), clusters)
    logger.info(
        f"{label} GHz: {sum(len(result.mpcs) for result in results)} MPCs in "
        f"{sum(len(result.clusters) for result in results)} clusters"
    )

    plots = layout.plots(label)
    svg = context.config.svg
    if samples:
        emit_plot_data("drift_curve", DriftCurveData(samples, model), plots, svg=svg)
    emit_plot_data(
        "power_delay_profile",
        PowerDelayProfileData([record for result in results for record in result.records]),
        plots,
        svg=svg,
    )
    if any(clusters):
        emit_plot_data(
            "delay_angle_map",
            DelayAngleMapData({result.position_id: result.clusters for result in results}),
            plots,
            svg=svg,
        )


def _write_scattering_csv(path: Path, matches: Sequence[ScatteringMatch]) -> Path:
    with path.open("w", encoding="utf-8", newline="") as file:
        writer = csv.writer(file, lineterminator="\n")
        writer.writerow(SCATTERING_CSV_COLUMNS)
        for match in matches:
            writer.writerow(
                (
                    match.position_id,
                    match.cluster_id,
                    match.panel_id,
                    match.material,
                    repr(match.delay_ns),
                    repr(match.configured_loss_db),
                    repr(match.recovered_loss_db),
                    repr(match.error_db),
                )
            )
    return path


def run_characterize(context: StageContext, band: int) -> None:
    scenario = context.scenario
    band_config = scenario.bands[band]
    label = band_config.label
    layout = context.layout
    mpcs_path, truth_path = _inputs(
        "characterize", layout.postproc(label, "mpcs.csv"), layout.truth(label)
    )
    grouped = _by_position(_read_calibrated(context, "characterize", label))
    clusters_by_position = read_clusters(mpcs_path)
    truth = _read_truth(truth_path)

    stats: list[ChannelStats] = []
    matches: list[ScatteringMatch] = []
    for rx in scenario.rx_list:
        clusters = clusters_by_position.get(rx.position_id, [])
        if not clusters or rx.position_id not in grouped:
            logger.warning(f"{label} GHz: Rx {rx.position_id} has no clusters, skipping")
            continue
        antennas = AntennaPair.of(scenario, rx.position_id)
        stats.append(
            characterize_position(
                rx.position_id,
                label,
                distance(scenario.tx.point, rx.point),
                has_line_of_sight(scenario, rx.position_id),
                grouped[rx.position_id],
                clusters,
                antenna_gain_db=antennas.boresight_gain_db,
            )
        )
        matches.extend(
            match_scatterers(clusters, truth.get(rx.position_id, []), scenario, rx.position_id, band)
        )

    write_stats_csv(layout.stats(label, "positions.csv"), stats)
    summary = summarize(stats, label, band_config.carrier_hz, matches)
    SUMMARY_SERIALIZER.write(layout.stats(label, "summary.json"), summary)
    _write_scattering_csv(layout.stats(label, "scattering.csv"), matches)
    logger.info(f"{label} GHz: characterized {len(stats)} positions, {len(matches)} scattering matches")
    if matches:
        emit_plot_data(
            "scattering_bars", ScatteringBarsData(matches), layout.plots(label), svg=context.config.svg
        )


def write_band_constants(path: Path, scenario: Scenario, bands: Sequence[int]) -> Path:
    with path.open("w", encoding="utf-8", newline="") as file:
        writer = csv.writer(file, lineterminator="\n")
        writer.writerow(BAND_CONSTANTS_CSV_COLUMNS)
        for band in bands:
            config = scenario.bands[band]
            writer.writerow(
                (
                    config.label,
                    repr(config.carrier_hz),
                    repr(config.bandwidth_hz),
                    config.sample_count,
                    config.period_bins,
                    repr(config.delay_bin_s * 1e9),
                    repr(config.max_delay_s * 1e9),
                    repr(config.max_path_length_m),
                    repr(config.alias_free_delay_s * 1e9),
                )
            )
    return path


def run_report(context: StageContext, bands: Sequence[int]) -> None:
    layout = context.layout
    summaries = []
    for band in bands:
        label = context.scenario.bands[band].label
        (summary_path,) = _inputs("report", layout.stats(label, "summary.json"))
        summaries.append(SUMMARY_SERIALIZER.read(summary_path))
    reference_path = context.config.reference_path or bundled_reference_path()
    rows = compare_reference(summaries, load_reference_table(reference_path))
    write_comparison_csv(layout.report("comparison.csv"), rows)
    layout.report("comparison.txt").write_text(format_comparison_text(rows), encoding="utf-8")
    write_band_constants(layout.report("band_constants.csv"), context.scenario, bands)
    logger.info(f"Compared {len(rows)} characteristics against {reference_path}")
    if len(summaries) == 2:
        trends = compare_bands(summaries)
        write_band_comparison_csv(layout.report("band_comparison.csv"), trends)
        layout.report("band_comparison.txt").write_text(format_band_comparison_text(trends), encoding="utf-8")
        agreeing = sum(row.agrees for row in trends)
        logger.info(f"{agreeing}/{len(trends)} characteristics follow the expected trend across bands")


BAND_STAGES: dict[Stage, Callable[[StageContext, int], None]] = {
    "synth": run_synth,
    "postproc": run_postproc,
    "characterize": run_characterize,
}


def run_stages(config: PipelineConfig) -> Manifest:
    """Run the selected stages in order and write the artifact manifest."""
    config.validate()
    stages = config.stages()
    if not config.scenario_path.is_file():
        raise ConfigError(f"Scenario {config.scenario_path} does not exist")
    scenario = load_scenario(config.scenario_path, seed=config.seed)
    bands = config.select_bands(scenario)
    layout = config.output
    try:
        layout.mkdir()
    except OSError as e:
        raise ConfigError(f"Output directory {layout.root} is not writable: {e}") from e
    context = StageContext(config=config, scenario=scenario, layout=layout)
    labels = [scenario.bands[band].label for band in bands]
    for stage in STAGES:
        if stage not in stages:
            continue
        logger.info(f"Stage {stage} ({', '.join(labels)} GHz)")
        if stage == "report":
            run_report(context, bands)
            continue
        for band in bands:
            BAND_STAGES[stage](context, band)

    manifest = build_manifest(
        layout.root,
        scenario=scenario.name,
        seed=scenario.rng_seed,
        bands=labels,
        stages=stages,
        exclude=(layout.logs, layout.manifest),
    )
    write_manifest(layout.manifest, manifest)
    logger.info(f"Wrote manifest with {len(manifest.artifacts)} artifacts to {layout.manifest}")
    return manifest


def exit_status_for(error: BaseException) -> int:
    match error:
        case StageInputMissing() | StorageError():
            return 2
        case ScenarioError() | ConfigError() | UnitMismatchError():
            return 1
        case _:
            # numeric and other internal failures
            return 3


def run_pipeline(config: PipelineConfig) -> PipelineResult:
    try:
        manifest = run_stages(config)
    except (SounderError, PipelineError, FloatingPointError, np.linalg.LinAlgError) as e:
        status = exit_status_for(e)
        logger.opt(exception=e).error(f"Pipeline failed with exit status {status}: {e}")
        return PipelineResult(exit_status=status, error=e)
    return PipelineResult(exit_status=0, manifest=manifest)
