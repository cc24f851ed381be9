import dataclasses
import math

import numpy as np
import pytest
from thzsounder.characterize import (
    ChannelStats,
    EnsembleSummary,
    ReferenceEntry,
    ReferenceTable,
    ScatteringMatch,
    bundled_reference_path,
    cluster_stats,
    compare_reference,
    comparison_flag,
    fit_ci,
    fit_lognormal,
    format_comparison_text,
    format_value,
    k_factor,
    k_factor_from_powers,
    load_reference_table,
    match_scatterers,
    pl_best,
    pl_omni,
    read_stats_csv,
    rms_spread,
    scattering_loss,
    summarize,
    write_stats_csv,
)
from thzsounder.constants import SPEED_OF_LIGHT
from thzsounder.errors import CharacterizationError, UnitMismatchError
from thzsounder.postproc import AntennaPair, Cluster, Mpc, postprocess_position
from thzsounder.synth import fspl, run_campaign, trace_paths
from thzsounder.waveform import CirRecord

MIRROR = {
    "id": "mirror",
    "center": [10.0, 0.0, 2.0],
    "normal": [0.0, 1.0, 0.0],
    "half_extents": [10.0, 2.0],
    "material": "metal",
    "scattering_loss_db": 5.0,
}


def _mpc(delay_s: float, gain: complex, az: float = 0.0, el: float = 0.0) -> Mpc:
    return Mpc(position_id=1, band_index=0, delay_s=delay_s, gain_linear=gain, aoa_az_deg=az, aoa_el_deg=el)


def _brute_delay_spread(values, powers):
    total = sum(powers)
    mean = sum(p * v for v, p in zip(values, powers, strict=True)) / total
    variance = sum(p * (v - mean) ** 2 for v, p in zip(values, powers, strict=True)) / total
    return math.sqrt(variance)


def _brute_circular_spread(angles_deg, powers):
    total = sum(powers)
    c = sum(p * math.cos(math.radians(a)) for a, p in zip(angles_deg, powers, strict=True)) / total
    s = sum(p * math.sin(math.radians(a)) for a, p in zip(angles_deg, powers, strict=True)) / total
    return math.degrees(math.sqrt(-2.0 * math.log(math.hypot(c, s))))


def test_spread_examples():
    assert rms_spread([0.0, 10e-9], [1.0, 1.0]) == pytest.approx(5e-9)
    assert rms_spread([0.0, 8e-9], [3.0, 1.0]) == pytest.approx(math.sqrt(12) * 1e-9)
    assert rms_spread([-10.0, 10.0], [1.0, 1.0], "azimuth") == pytest.approx(10.03, abs=0.01)
    assert rms_spread([350.0, 10.0], [1.0, 1.0], "azimuth") == pytest.approx(10.03, abs=0.01)
    for domain in ("delay", "azimuth", "elevation"):
        assert rms_spread([42.0], [0.5], domain) == pytest.approx(0.0, abs=1e-6)


def test_spreads_match_brute_force():
    rng = np.random.default_rng(2024)
    for _ in range(1000):
        count = int(rng.integers(2, 20))
        powers = rng.uniform(0.01, 1.0, count).tolist()
        delays = rng.uniform(0.0, 200e-9, count).tolist()
        angles = rng.uniform(0.0, 360.0, count).tolist()
        assert rms_spread(delays, powers, "delay") == pytest.approx(
            _brute_delay_spread(delays, powers), rel=1e-9
        )
        assert rms_spread(angles, powers, "azimuth") == pytest.approx(
            _brute_circular_spread(angles, powers), rel=1e-9
        )


def test_spreads_are_shift_and_rotation_invariant():
    rng = np.random.default_rng(11)
    for _ in range(100):
        count = int(rng.integers(2, 12))
        powers = rng.uniform(0.01, 1.0, count)
        delays = rng.uniform(0.0, 100e-9, count)
        angles = rng.uniform(0.0, 360.0, count)
        shift = float(rng.uniform(0.0, 500e-9))
        rotation = float(rng.uniform(0.0, 360.0))
        assert rms_spread(delays + shift, powers) == pytest.approx(rms_spread(delays, powers), rel=1e-9)
        assert rms_spread((angles + rotation) % 360.0, powers, "azimuth") == pytest.approx(
            rms_spread(angles, powers, "azimuth"), rel=1e-9
        )


def test_spread_errors():
    with pytest.raises(CharacterizationError):
        rms_spread([], [])
    with pytest.raises(CharacterizationError):
        rms_spread([1.0, 2.0], [0.0, 0.0])
    with pytest.raises(CharacterizationError):
        rms_spread([1.0, 2.0], [1.0])


def test_pl_best():
    samples = np.zeros(2048, dtype=np.complex128)
    samples[100] = 1.0
    strong = CirRecord(1, 0, 0.0, 0.0, 0.0, samples, 1e-9, 2047)
    assert pl_best([strong]) == pytest.approx(33.11, abs=0.01)
    weak = strong.with_samples(samples * 0.1)
    assert pl_best([strong, weak]) == pl_best([strong])
    assert pl_best([strong], reduce="energy", antenna_gain_db=32.0) == pytest.approx(32.0)
    with pytest.raises(CharacterizationError):
        pl_best([])


def test_pl_omni():
    assert pl_omni([_mpc(10e-9, 1e-4)]) == pytest.approx(80.0)
    assert pl_omni([_mpc(10e-9, 1e-4), _mpc(20e-9, 1e-4j)]) == pytest.approx(76.99, abs=0.01)
    with pytest.raises(CharacterizationError):
        pl_omni([])


def test_fit_ci_exact_model():
    points = [(d, fspl(1.0, 140e9) + 20 * math.log10(d)) for d in (1.0, 2.0, 5.0, 10.0)]
    fit = fit_ci(points, 140e9)
    assert fit.ple == pytest.approx(2.0)
    assert fit.sigma_sf_db == pytest.approx(0.0, abs=1e-9)
    assert fit.predict(10.0) == pytest.approx(points[-1][1])


@pytest.mark.parametrize("ple", [1.8, 2.0, 2.2])
def test_fit_ci_recovers_shadow_fading(ple):
    rng = np.random.default_rng(int(ple * 10))
    distances = 10 ** rng.uniform(0.0, 1.5, 100)
    shadowing = rng.normal(0.0, 1.0, 100)
    losses = fspl(1.0, 220e9) + 10 * ple * np.log10(distances) + shadowing
    fit = fit_ci(list(zip(distances.tolist(), losses.tolist(), strict=True)), 220e9)

    x = 10 * np.log10(distances)
    y = losses - fspl(1.0, 220e9)
    expected = float(np.sum(x * y) / np.sum(x * x))
    assert fit.ple == pytest.approx(expected, rel=1e-12)
    assert fit.ple == pytest.approx(ple, abs=0.05)
    assert fit.sigma_sf_db == pytest.approx(1.0, abs=0.3)
    assert len(fit.residuals_db) == 100


def test_fit_ci_errors():
    with pytest.raises(CharacterizationError):
        fit_ci([(5.0, 90.0)], 140e9)
    with pytest.raises(CharacterizationError):
        fit_ci([(5.0, 90.0), (5.0, 91.0)], 140e9)
    with pytest.raises(CharacterizationError):
        fit_ci([(0.5, 70.0), (5.0, 91.0)], 140e9)


def test_k_factor():
    assert k_factor_from_powers([10.0, 1.0]) == pytest.approx(10.0)
    assert k_factor_from_powers([1.0, 1.0]) == pytest.approx(0.0)
    assert k_factor_from_powers([4.0, 3.0, 1.0]) == pytest.approx(0.0)
    assert math.isinf(k_factor_from_powers([2.0]))
    assert k_factor_from_powers([1e-9, 3e-10, 2e-11]) == pytest.approx(
        k_factor_from_powers([1e3, 3e2, 2e1])
    )
    with pytest.raises(CharacterizationError):
        k_factor_from_powers([])


def test_k_factor_of_clusters():
    clusters = [
        Cluster.from_members(0, [_mpc(10e-9, math.sqrt(10) * 1e-4)]),
        Cluster.from_members(1, [_mpc(50e-9, 1e-4, az=90.0)]),
    ]
    assert k_factor(clusters) == pytest.approx(10.0)


def test_cluster_stats():
    singletons = [Cluster.from_members(index, [_mpc(index * 10e-9, 1e-4)]) for index in range(3)]
    assert cluster_stats(singletons) == (3, 0.0, 0.0, 0.0)
    assert cluster_stats([]) == (0, 0.0, 0.0, 0.0)
    wide = Cluster.from_members(0, [_mpc(0.0, 1e-4), _mpc(10e-9, 1e-4)])
    assert cluster_stats([wide, singletons[0]]).cds_s == pytest.approx(2.5e-9)


def test_fit_lognormal():
    fit = fit_lognormal([3.0] * 5)
    assert fit.sigma == 0.0
    assert fit.mu == pytest.approx(math.log10(3.0))
    assert fit.sample_mean == pytest.approx(3.0)

    rng = np.random.default_rng(5)
    fit = fit_lognormal(10 ** rng.normal(0.9, 0.2, 1000))
    assert fit.mu == pytest.approx(0.9, rel=0.05)
    assert fit.sigma == pytest.approx(0.2, rel=0.05)

    db_fit = fit_lognormal([9.0, 11.0], domain="db")
    assert db_fit.mu == pytest.approx(10.0)
    assert db_fit.sigma == pytest.approx(1.0)

    with pytest.raises(CharacterizationError):
        fit_lognormal([1.0, 0.0])
    with pytest.raises(CharacterizationError):
        fit_lognormal([])


def test_scattering_loss_construction():
    delay_s = 10e-9
    loss_db = fspl(SPEED_OF_LIGHT * delay_s, 140e9) + 10.0
    cluster = Cluster.from_members(0, [_mpc(delay_s, 10 ** (-loss_db / 20))])
    assert scattering_loss(cluster, 140e9) == pytest.approx(10.0)
    with pytest.raises(CharacterizationError):
        scattering_loss(Cluster.from_members(0, [_mpc(delay_s, 0.0)]), 140e9)


def test_scattering_loss_recovered_from_synthesized_campaign(make_scenario):
    scenario = make_scenario([(3.0, 1.0, 1.6)], tx=(1.0, 1.0, 1.6), objects=[MIRROR])
    records = run_campaign(scenario, 0)
    result = postprocess_position(
        records, system_response=None, drift_model=None, antennas=AntennaPair.of(scenario, 1)
    )
    matches = match_scatterers(result.clusters, trace_paths(scenario, 1, 0), scenario, 1, 0)
    assert len(matches) == 1
    (match,) = matches
    assert match.panel_id == "mirror"
    assert match.material == "metal"
    assert match.configured_loss_db == 5.0
    assert abs(match.error_db) <= 0.5


def _reference_stats(band: str, values: dict[str, float], cluster_counts: list[int]) -> list[ChannelStats]:
    return [
        ChannelStats(
            position_id=index + 1,
            band=band,
            distance_m=3.0 + index,
            los=True,
            pl_best_db=95.0,
            pl_omni_db=92.0,
            k_factor_db=values["k_factor"],
            ds_s=values["ds"] * 1e-9,
            asa_deg=values["asa"],
            esa_deg=values["esa"],
            n_clusters=count,
            cds_s=values["cds"] * 1e-9,
            casa_deg=values["casa"],
            cesa_deg=values["cesa"],
        )
        for index, count in enumerate(cluster_counts)
    ]


REFERENCE_MEANS = {
    "140": {"ds": 7.94, "k_factor": 10.3, "asa": 28.18, "esa": 5.5, "cds": 1.43, "casa": 4.42, "cesa": 5.38},
    "220": {"ds": 7.24, "k_factor": 11.3, "asa": 26.92, "esa": 3.98, "cds": 1.22, "casa": 3.95, "cesa": 4.84},
}
# nine positions averaging 51/9 and 31/9 clusters
CLUSTER_COUNTS = {"140": [5, 6, 6, 5, 6, 6, 5, 6, 6], "220": [3, 4, 3, 4, 3, 4, 3, 4, 3]}


def test_reference_means_pass_through_report():
    reference = load_reference_table(bundled_reference_path())
    summaries = [
        summarize(_reference_stats(band, REFERENCE_MEANS[band], CLUSTER_COUNTS[band]), band, float(band) * 1e9)
        for band in ("140", "220")
    ]
    rows = compare_reference(summaries, reference)
    assert len(rows) == 16
    for row in rows:
        entry = reference.lookup(row.band, row.characteristic)
        assert entry is not None
        assert format_value(row.measured) == format_value(entry.value)
    flags = {(row.band, row.characteristic): row.flag for row in rows}
    assert flags[("140", "ds")] == "matches reference"
    assert flags[("140", "n_clusters")] == "sparser than reference"
    text = format_comparison_text(rows)
    assert "7.94" in text
    assert "5.67" in text
    assert "3.44" in text


def test_comparison_flags():
    assert comparison_flag("ds", -3.0) == "reference overestimates"
    assert comparison_flag("asa", 2.0) == "reference underestimates"
    assert comparison_flag("k_factor", 1.0) == "more LoS-dominant than reference"
    assert comparison_flag("k_factor", -1.0) == "reference overestimates"
    assert comparison_flag("n_clusters", -1.0) == "sparser than reference"
    assert comparison_flag("cds", 0.0) == "matches reference"


def test_compare_reference_edge_cases():
    summary = summarize(_reference_stats("140", REFERENCE_MEANS["140"], CLUSTER_COUNTS["140"]), "140", 140e9)
    assert compare_reference([summary], ReferenceTable("empty")) == []
    assert format_comparison_text([]) == "No reference values to compare.\n"

    shared = ReferenceTable("shared", (ReferenceEntry(None, "ds", 20.0, "ns"),))
    (row,) = compare_reference([summary], shared)
    assert row.delta == pytest.approx(7.94 - 20.0)
    assert row.flag == "reference overestimates"

    wrong_unit = ReferenceTable("wrong", (ReferenceEntry("140", "ds", 7.94, "s"),))
    with pytest.raises(UnitMismatchError):
        compare_reference([summary], wrong_unit)


def test_summary_skips_infinite_k_factor():
    stats = _reference_stats("140", REFERENCE_MEANS["140"], CLUSTER_COUNTS["140"])
    stats.append(
        ChannelStats(10, "140", 12.0, True, 90.0, 89.0, math.inf, 5e-9, 10.0, 2.0, 1, 0.0, 0.0, 0.0)
    )
    summary = summarize(stats, "140", 140e9)
    assert summary.fits["k_factor"].count == 9
    assert summary.means["k_factor"] == pytest.approx(10.3)
    assert summary.position_count == 10


def test_stats_csv_round_trip(tmp_path):
    stats = _reference_stats("220", REFERENCE_MEANS["220"], CLUSTER_COUNTS["220"])
    path = write_stats_csv(tmp_path / "positions.csv", stats)
    restored = read_stats_csv(path)
    assert [item.n_clusters for item in restored] == CLUSTER_COUNTS["220"]
    for original, item in zip(stats, restored, strict=True):
        assert item.position_id == original.position_id
        assert item.ds_s == pytest.approx(original.ds_s, rel=1e-12)
        assert item.cds_s == pytest.approx(original.cds_s, rel=1e-12)
        assert item.asa_deg == original.asa_deg


def _nlos_outlier(band: str) -> ChannelStats:
    return ChannelStats(10, band, 14.0, False, 110.0, 104.0, 2.0, 40e-9, 60.0, 12.0, 9, 4e-9, 9.0, 8.0)


def test_summary_leaves_nlos_positions_out_of_the_ensemble():
    los = _reference_stats("140", REFERENCE_MEANS["140"], CLUSTER_COUNTS["140"])
    baseline = summarize(los, "140", 140e9)
    summary = summarize([*los, _nlos_outlier("140")], "140", 140e9)
    assert summary.position_count == 10
    assert summary.los_count == 9
    assert summary.means == pytest.approx(baseline.means)
    assert summary.means["ds"] == pytest.approx(7.94)
    assert summary.fits["ds"].count == 9
    assert summary.nlos_means["ds"] == pytest.approx(40.0)
    assert summary.nlos_means["n_clusters"] == 9.0
    assert summary.ci_best == baseline.ci_best
    assert EnsembleSummary.from_json(summary.to_json()) == summary


def test_summary_without_los_positions_uses_every_position():
    summary = summarize([_nlos_outlier("140")], "140", 140e9)
    assert summary.los_count == 0
    assert summary.ci_best is None
    assert summary.means["ds"] == pytest.approx(40.0)
    assert summary.nlos_means == {}


def test_summary_scattering_mean_per_material():
    matches = [
        ScatteringMatch(1, 1, "door", "metal", 20.0, 5.0, 4.0),
        ScatteringMatch(2, 1, "rack", "metal", 25.0, 20.0, 22.0),
        ScatteringMatch(2, 2, "pillar", "concrete", 30.0, 15.0, 15.5),
    ]
    stats = _reference_stats("140", REFERENCE_MEANS["140"], CLUSTER_COUNTS["140"])
    summary = summarize(stats, "140", 140e9, matches)
    assert summary.scattering_loss_db == {"concrete": [15.5], "metal": [4.0, 22.0]}
    assert summary.scattering_mean_db == pytest.approx({"concrete": 15.5, "metal": 13.0})
    assert summary.to_json()["scattering_mean_db"] == pytest.approx({"concrete": 15.5, "metal": 13.0})


def test_scattered_path_without_scatterer_is_rejected(make_scenario):
    scenario = make_scenario([(3.0, 1.0, 1.6)], tx=(1.0, 1.0, 1.6), objects=[MIRROR])
    path = next(path for path in trace_paths(scenario, 1, 0) if path.kind == "once_scattered")
    cluster = Cluster.from_members(0, [_mpc(path.delay_s, 1e-4, path.aoa_az_deg, path.aoa_el_deg)])
    with pytest.raises(CharacterizationError):
        match_scatterers([cluster], [dataclasses.replace(path, scatterer_id=None)], scenario, 1, 0)
