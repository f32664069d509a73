import math

import numpy as np
import pytest
from scipy.signal import convolve2d
from scipy.stats import chisquare

from conftest import make_spec, target_band0
from pictochart.core.errors import DimensionMismatch, NoAlphaChannel, SizeLimit
from pictochart.models.field import DistanceField, ForegroundDerivation, ForegroundMask
from pictochart.models.raster import RasterImage
from pictochart.schemas.chart import BarAnchor, ChartType, PieSlice
from pictochart.schemas.fidelity import FidelityMethod, RegionWeights, SamplingConfig
from pictochart.services.chart_model import bar_slots, column_mask, normalize
from pictochart.services.distance_field import band_partition, build_distance_field, default_region_weights
from pictochart.services.fidelity import (
    exhaustive_f1,
    preprocess_chart,
    sample_band_points,
    score_chart,
    weighted_f1,
)


def _rgba(height, width, alpha=0):
    pixels = np.zeros((height, width, 4), dtype=np.uint8)
    pixels[..., :3] = (40, 90, 200)
    pixels[..., 3] = alpha
    return pixels


def _fixture(index):
    """Gráfico 64x64 y un primer plano derivado de otra serie del mismo tipo."""
    rng = np.random.default_rng(100 + index)
    chart_type = list(ChartType)[index % 3]
    count = int(rng.integers(2, 6))

    def series():
        return [[f"s{i}", int(v)] for i, v in enumerate(rng.integers(1, 10, size=count))]

    nspec = normalize(make_spec(chart_type, series(), canvas=(64, 64), margin=4))
    other = build_distance_field(normalize(make_spec(chart_type, series(), canvas=(64, 64), margin=4)))
    mask = np.roll(other.distances < rng.uniform(1.5, 5.0), int(rng.integers(-3, 4)), axis=0)
    return ForegroundMask(mask=mask), build_distance_field(nspec), default_region_weights(chart_type, (64, 64))


# preprocesamiento

def test_opaque_image_is_all_foreground(line_spec):
    mask = preprocess_chart(_rgba(512, 512, 255), ChartType.LINE, normalize(line_spec))
    assert mask.mask.all()
    assert mask.derivation == ForegroundDerivation.ALPHA_THRESHOLD


def test_transparent_image_is_empty(bar_spec):
    mask = preprocess_chart(RasterImage(_rgba(512, 512)), ChartType.BAR, normalize(bar_spec))
    assert not mask.mask.any()
    assert mask.derivation == ForegroundDerivation.BAR_BOUNDING_BOX


def test_single_pixel_blur_matches_direct_convolution(line_spec):
    pixels = _rgba(512, 512)
    pixels[200, 300, 3] = 255
    mask = preprocess_chart(pixels, ChartType.LINE, normalize(line_spec))

    taps = np.exp(-np.arange(-6, 7) ** 2 / (2 * 2.0 ** 2))
    oracle = convolve2d(pixels[..., 3] / 255.0, np.outer(taps, taps), mode="same") > 0
    assert np.array_equal(mask.mask, oracle)
    rows, cols = np.nonzero(mask.mask)
    assert (rows.min(), rows.max(), cols.min(), cols.max()) == (194, 206, 294, 306)


def test_bar_foreground_is_bounding_box_per_slot(bar_spec):
    nspec = normalize(bar_spec)
    pixels = _rgba(512, 512)
    # objeto inclinado dentro de la primera ranura
    for step in range(60):
        pixels[200 + step, 100 + step, 3] = 255
    mask = preprocess_chart(pixels, ChartType.BAR, nspec).mask

    slot = np.flatnonzero(column_mask(512, bar_slots(nspec)[0]))
    rows, cols = np.nonzero(mask[:, slot])
    box = mask[rows.min():rows.max() + 1, slot[cols.min()]:slot[cols.max()] + 1]
    assert box.all()
    assert (rows.min(), rows.max()) == (194, 265)
    assert not mask[:, np.flatnonzero(column_mask(512, bar_slots(nspec)[1]))].any()


def test_rgb_input_is_rejected(line_spec):
    with pytest.raises(NoAlphaChannel) as info:
        preprocess_chart(np.zeros((512, 512, 3), dtype=np.uint8), ChartType.LINE, normalize(line_spec))
    assert "matting" in info.value.detail
    assert info.value.exit_code == 4


def test_image_must_match_canvas(line_spec):
    with pytest.raises(DimensionMismatch):
        preprocess_chart(_rgba(256, 512), ChartType.LINE, normalize(line_spec))


# muestreo

def test_single_cell_region_repeats_point():
    region = np.zeros((8, 8), dtype=bool)
    region[3, 5] = True
    points = sample_band_points(region, 5, np.random.default_rng(0))
    assert points.tolist() == [[3, 5]] * 5


def test_empty_region_gives_no_points():
    points = sample_band_points(np.zeros((8, 8), dtype=bool), 100, np.random.default_rng(0))
    assert points.shape == (0, 2)


def test_sampling_is_uniform():
    region = np.zeros((10, 10), dtype=bool)
    region[[1, 2, 7, 9], [4, 0, 7, 3]] = True
    points = sample_band_points(region, 100_000, np.random.default_rng(11))
    flat = points[:, 0] * 10 + points[:, 1]
    _, counts = np.unique(flat, return_counts=True)
    assert len(counts) == 4
    assert chisquare(counts).pvalue > 0.001


def test_sampling_is_deterministic():
    region = np.ones((16, 16), dtype=bool)
    first = sample_band_points(region, 50, np.random.default_rng(3))
    second = sample_band_points(region, 50, np.random.default_rng(3))
    assert np.array_equal(first, second)


# identidades

@pytest.mark.parametrize("chart_type", list(ChartType))
def test_band_zero_foreground_scores_one(chart_type):
    field, rw, band0 = target_band0(normalize(make_spec(chart_type)))
    mask = ForegroundMask(mask=band0)
    exhaustive = exhaustive_f1(mask, field, rw)
    sampled = weighted_f1(mask, field, rw, SamplingConfig(points_per_band=1000, rng_seed=3))
    for report in (exhaustive, sampled):
        assert report.weighted_precision == 1.0
        assert report.weighted_recall == 1.0
        assert report.f1 >= 0.99
        assert report.f1 == pytest.approx(1.0, abs=1e-7)


@pytest.mark.parametrize("chart_type", list(ChartType))
def test_empty_foreground_scores_zero(chart_type):
    field, rw, _ = target_band0(normalize(make_spec(chart_type)))
    mask = ForegroundMask(mask=np.zeros((512, 512), dtype=bool))
    for report in (exhaustive_f1(mask, field, rw), weighted_f1(mask, field, rw)):
        assert (report.weighted_precision, report.weighted_recall, report.f1) == (0.0, 0.0, 0.0)
        assert all(tally.samples == 0 for tally in report.per_band)


@pytest.mark.parametrize("chart_type", list(ChartType))
def test_full_canvas_has_full_recall_and_partial_precision(chart_type):
    field, rw, _ = target_band0(normalize(make_spec(chart_type)))
    report = exhaustive_f1(ForegroundMask(mask=np.ones((512, 512), dtype=bool)), field, rw)
    assert report.weighted_recall == 1.0
    assert report.weighted_precision < 1.0


def test_foreground_beyond_last_band_scores_zero(bar_spec):
    nspec = normalize(bar_spec)
    field, rw, _ = target_band0(nspec)
    far = field.distances >= rw.band_edges[-1]
    report = exhaustive_f1(ForegroundMask(mask=far), field, rw)
    assert report.weighted_precision == 0.0
    assert report.f1 == 0.0
    assert report.per_band[-1].hits == report.per_band[-1].samples == int(far.sum())


def _horizontal_line_field(row=100, size=512):
    """Campo de una recta horizontal: la distancia es la diferencia de filas."""
    distances = np.abs(np.arange(size, dtype=np.float64) - row)[:, None].repeat(size, axis=1)
    return DistanceField(distances=distances)


def test_outside_pixels_dilute_precision():
    field = _horizontal_line_field()
    rw = default_region_weights(ChartType.LINE)
    mask = np.zeros((512, 512), dtype=bool)
    mask[93:108] = True    # banda 0
    mask[300:315] = True   # misma cantidad más allá de 64 px
    report = exhaustive_f1(ForegroundMask(mask=mask), field, rw)
    assert report.weighted_precision == pytest.approx(1 / 1.05)


def test_graded_credit_of_shifted_band():
    field = _horizontal_line_field()
    rw = default_region_weights(ChartType.LINE)
    band0 = band_partition(field, rw)[0]
    shifted = np.roll(band0, 16, axis=0)
    report = exhaustive_f1(ForegroundMask(mask=shifted), field, rw)
    assert rw.credits[1] == pytest.approx(0.45 / 0.95)
    assert report.weighted_precision == pytest.approx(rw.credits[1], abs=0.01)
    assert report.per_band[0].hits == 0


def test_credits_are_graded_from_one_to_zero():
    rw = default_region_weights(ChartType.BAR)
    assert rw.credits[0] == 1.0
    assert rw.credits[-1] == 0.0
    assert list(rw.credits) == sorted(rw.credits, reverse=True)
    flat = RegionWeights(band_edges=(8.0,), weights=(1.0, 1.0))
    assert flat.credits == (1.0, 0.0)


@pytest.mark.parametrize("factor", [2.0, 3.7, 1e-3])
def test_weight_scale_invariance(factor):
    mask, field, rw = _fixture(4)
    scaled = RegionWeights(band_edges=rw.band_edges, weights=tuple(w * factor for w in rw.weights))
    assert exhaustive_f1(mask, field, scaled).f1 == pytest.approx(exhaustive_f1(mask, field, rw).f1, abs=1e-12)


def test_reports_are_reproducible_from_seed():
    mask, field, rw = _fixture(1)
    cfg = SamplingConfig(points_per_band=2000, rng_seed=42)
    first = weighted_f1(mask, field, rw, cfg)
    second = weighted_f1(mask, field, rw, cfg)
    assert first == second
    assert first.model_dump_json() == second.model_dump_json()
    assert first.seed == 42
    assert first.method == FidelityMethod.SAMPLED


def test_tallies_are_consistent():
    mask, field, rw = _fixture(2)
    report = weighted_f1(mask, field, rw, SamplingConfig(points_per_band=500, rng_seed=5))
    assert len(report.per_band) == len(report.recall_per_band) == rw.band_count
    for tally in report.per_band + report.recall_per_band:
        assert tally.samples == (500 if tally.region_px > 0 else 0)
        assert tally.hits <= tally.samples
    assert sum(t.region_px for t in report.per_band) == 64 * 64
    assert report.f1 == pytest.approx(
        2 * report.weighted_precision * report.weighted_recall
        / (report.weighted_precision + report.weighted_recall + report.epsilon)
    )


def test_each_band_draws_its_own_points():
    # todo el lienzo cae en la banda 0; las demás quedan vacías
    field = DistanceField(distances=np.zeros((64, 64)))
    rw = default_region_weights(ChartType.LINE, (64, 64))
    mask = np.zeros((64, 64), dtype=bool)
    mask[:, :16] = True
    report = weighted_f1(ForegroundMask(mask=mask), field, rw, SamplingConfig(points_per_band=400, rng_seed=1))
    first, *rest = report.per_band
    assert (first.samples, first.region_px) == (400, 64 * 64)
    assert 0 < first.hits < 400
    assert all(t.samples == t.hits == t.region_px == 0 for t in rest)
    assert report.weighted_precision == 1.0


def test_dimension_mismatch_between_mask_and_field():
    field = DistanceField(distances=np.zeros((64, 64)))
    rw = default_region_weights(ChartType.LINE, (64, 64))
    with pytest.raises(DimensionMismatch):
        exhaustive_f1(ForegroundMask(mask=np.ones((32, 64), dtype=bool)), field, rw)


def test_exhaustive_rejects_large_rasters():
    field = DistanceField(distances=np.zeros((1025, 8)))
    rw = default_region_weights(ChartType.LINE)
    with pytest.raises(SizeLimit):
        exhaustive_f1(ForegroundMask(mask=np.ones((1025, 8), dtype=bool)), field, rw)


# muestreo contra oráculo

@pytest.mark.parametrize("index", range(50))
def test_sampled_matches_exhaustive(index):
    mask, field, rw = _fixture(index)
    sampled = weighted_f1(mask, field, rw, SamplingConfig(points_per_band=10_000, rng_seed=7))
    exhaustive = exhaustive_f1(mask, field, rw)
    assert abs(sampled.f1 - exhaustive.f1) <= 0.02
    assert 0.0 <= sampled.f1 <= 1.0


def test_sampled_spread_across_seeds_is_small():
    mask, field, rw = _fixture(0)
    scores = [weighted_f1(mask, field, rw, SamplingConfig(points_per_band=10_000, rng_seed=s)).f1 for s in range(1, 21)]
    assert np.std(scores, ddof=1) <= 0.01


# degradación monótona

def _strictly_decreasing(values):
    return all(a > b for a, b in zip(values, values[1:]))


def test_line_shift_degrades_monotonically(line_spec):
    field, rw, band0 = target_band0(normalize(line_spec))
    scores = [exhaustive_f1(ForegroundMask(mask=np.roll(band0, shift, axis=0)), field, rw).f1 for shift in (0, 8, 16, 32)]
    assert _strictly_decreasing(scores)


def test_bar_top_perturbation_degrades_monotonically(bar_spec):
    nspec = normalize(bar_spec)
    field, rw, _ = target_band0(nspec)
    scores = []
    for delta in (0, 8, 16, 32):
        bars = tuple(BarAnchor(x_center_px=b.x_center_px, bar_height_px=b.bar_height_px - delta) for b in nspec.bars)
        _, _, perturbed = target_band0(nspec.model_copy(update={"bars": bars}))
        scores.append(exhaustive_f1(ForegroundMask(mask=perturbed), field, rw).f1)
    assert _strictly_decreasing(scores)


def test_pie_rotation_degrades_monotonically(pie_spec):
    nspec = normalize(pie_spec)
    field, rw, _ = target_band0(nspec)
    scores = []
    for degrees in (0, 5, 15):
        theta = math.radians(degrees)
        slices = tuple(
            PieSlice(start_angle_rad=s.start_angle_rad + theta, end_angle_rad=s.end_angle_rad + theta)
            for s in nspec.pie.slices
        )
        rotated = nspec.model_copy(update={"pie": nspec.pie.model_copy(update={"slices": slices})})
        _, _, band0 = target_band0(rotated)
        scores.append(exhaustive_f1(ForegroundMask(mask=band0), field, rw).f1)
    assert _strictly_decreasing(scores)


@pytest.mark.parametrize("chart_type", list(ChartType))
def test_painted_band_zero_keeps_recall_and_pays_for_blur(chart_type):
    spec = make_spec(chart_type)
    _, _, band0 = target_band0(normalize(spec))
    pixels = _rgba(512, 512)
    pixels[band0, 3] = 255
    report, _ = score_chart(pixels, spec, exhaustive=True)
    # el desenfoque ensancha el primer plano unos 6 px por lado
    assert report.weighted_recall == 1.0
    assert 0.75 <= report.f1 < 0.99


def test_score_chart_echoes_configuration(bar_spec):
    pixels = _rgba(512, 512)
    pixels[100:140, 120:160, 3] = 255
    report, field = score_chart(pixels, bar_spec, cfg=SamplingConfig(points_per_band=500, rng_seed=9))
    assert field.shape == (512, 512)
    assert report.chart_type == ChartType.BAR
    assert report.band_edges == (8.0, 24.0, 64.0)
    assert report.weights == (1.0, 0.5, 0.2, 0.05)
    assert report.blur_sigma == 2.0
    assert report.seed == 9
    assert report.points_per_band == 500

    oracle, _ = score_chart(pixels, bar_spec, exhaustive=True)
    assert oracle.method == FidelityMethod.EXHAUSTIVE
    assert oracle.seed is None
