import csv

import pytest
from thzsounder.characterize import (
    ChannelStats,
    EnsembleSummary,
    ScatteringMatch,
    compare_bands,
    format_band_comparison_text,
    observed_trend,
    summarize,
    write_band_comparison_csv,
)
from thzsounder.errors import CharacterizationError
from thzsounder.synth import fspl

LOS_MEANS = {
    "140": {"ds": 7.94, "k_factor": 10.3, "asa": 28.18, "esa": 5.5, "cds": 1.43, "casa": 4.42, "cesa": 5.38},
    "220": {"ds": 7.24, "k_factor": 11.3, "asa": 26.92, "esa": 3.98, "cds": 1.22, "casa": 3.95, "cesa": 4.84},
}
CLUSTER_COUNTS = {"140": [5, 6, 6, 5, 6, 6, 5, 6, 6], "220": [3, 4, 3, 4, 3, 4, 3, 4, 3]}
SCATTERING = {
    "140": [
        ScatteringMatch(1, 1, "door", "metal", 20.0, 12.0, 12.0),
        ScatteringMatch(2, 1, "pillar", "concrete", 30.0, 18.0, 18.0),
    ],
    "220": [
        ScatteringMatch(1, 1, "door", "metal", 20.0, 12.0, 10.0),
        ScatteringMatch(2, 1, "pillar", "concrete", 30.0, 18.0, 17.0),
    ],
}


def _summary(band: str) -> EnsembleSummary:
    frequency_hz = float(band) * 1e9
    values = LOS_MEANS[band]
    stats = [
        ChannelStats(
            position_id=index + 1,
            band=band,
            distance_m=3.0 + index,
            los=True,
            pl_best_db=fspl(3.0 + index, frequency_hz) + 0.5 * (index % 3 - 1),
            pl_omni_db=fspl(3.0 + index, frequency_hz) - 1.0,
            k_factor_db=values["k_factor"],
            ds_s=values["ds"] * 1e-9,
            asa_deg=values["asa"],
            esa_deg=values["esa"],
            n_clusters=count,
            cds_s=values["cds"] * 1e-9,
            casa_deg=values["casa"],
            cesa_deg=values["cesa"],
        )
        for index, count in enumerate(CLUSTER_COUNTS[band])
    ]
    return summarize(stats, band, frequency_hz, SCATTERING[band])


def test_observed_trend():
    assert observed_trend("ds", -0.7) == "decrease"
    assert observed_trend("k_factor", 1.0) == "increase"
    assert observed_trend("ds", 0.0) == "similar"
    assert observed_trend("ple_best", 0.15) == "similar"
    assert observed_trend("ple_best", -0.5) == "decrease"
    assert observed_trend("sigma_sf_omni", 0.8) == "similar"


def test_published_trends_agree_across_bands():
    rows = compare_bands([_summary("220"), _summary("140")])
    by_name = {row.characteristic: row for row in rows}
    assert all(row.low_band == "140" and row.high_band == "220" for row in rows)
    assert by_name["k_factor"].observed == "increase"
    assert by_name["k_factor"].delta == pytest.approx(1.0)
    assert by_name["ds"].delta == pytest.approx(-0.7)
    assert by_name["n_clusters"].delta == pytest.approx(31 / 9 - 51 / 9)
    for name in ("ds", "asa", "esa", "n_clusters", "cds", "casa", "cesa"):
        assert by_name[name].observed == "decrease"
    assert by_name["ple_best"].observed == "similar"
    assert by_name["scattering_loss_metal"].delta == pytest.approx(-2.0)
    assert by_name["scattering_loss_concrete"].unit == "dB"
    assert all(row.agrees for row in rows)
    assert [row.characteristic for row in rows][-2:] == ["scattering_loss_concrete", "scattering_loss_metal"]


def test_diverging_trend_is_flagged():
    low = _summary("140")
    high = _summary("220")
    rows = compare_bands([low, high])
    text = format_band_comparison_text(rows)
    assert "differs" not in text
    assert text.endswith(f"{len(rows)}/{len(rows)} characteristics follow the expected trend\n")

    swapped = compare_bands([EnsembleSummary.from_json({**high.to_json(), "frequency_hz": 100e9}), low])
    k_row = next(row for row in swapped if row.characteristic == "k_factor")
    assert k_row.low_band == "220"
    assert k_row.observed == "decrease"
    assert not k_row.agrees
    assert "differs" in format_band_comparison_text(swapped)


def test_band_comparison_csv(tmp_path):
    rows = compare_bands([_summary("140"), _summary("220")])
    path = write_band_comparison_csv(tmp_path / "report" / "band_comparison.csv", rows)
    with path.open(encoding="utf-8", newline="") as file:
        written = list(csv.DictReader(file))
    assert len(written) == len(rows)
    ds = next(row for row in written if row["characteristic"] == "ds")
    assert (ds["low"], ds["high"], ds["delta"]) == ("7.94", "7.24", "-0.7")
    assert (ds["expected"], ds["observed"], ds["agrees"]) == ("decrease", "decrease", "1")


def test_band_comparison_errors():
    with pytest.raises(CharacterizationError):
        compare_bands([_summary("140")])
    with pytest.raises(CharacterizationError):
        compare_bands([_summary("140"), _summary("140")])
    assert format_band_comparison_text([]) == "No characteristics shared by both bands.\n"
