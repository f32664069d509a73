import json

import numpy as np
import pytest
from PIL import Image

from pictochart.schemas.chart import ChartSpec, ChartType
from pictochart.services.distance_field import band_partition, build_distance_field, default_region_weights

SPECS = {
    ChartType.BAR: [["a", 2], ["b", 3], ["c", 4]],
    ChartType.LINE: [["a", 2], ["b", 3.5], ["c", 2.5], ["d", 3]],
    ChartType.PIE: [["a", 1], ["b", 2], ["c", 3], ["d", 2]],
}


def make_spec(chart_type, series=None, canvas=(512, 512), margin=32) -> ChartSpec:
    return ChartSpec(
        chart_type=chart_type,
        series=series if series is not None else SPECS[ChartType(chart_type)],
        canvas=canvas,
        plot_margin_px=margin,
    )


def target_band0(nspec):
    """Campo objetivo, bandas por defecto y región de la banda 0 de un gráfico normalizado."""
    field = build_distance_field(nspec)
    rw = default_region_weights(nspec.chart_type, nspec.canvas)
    return field, rw, band_partition(field, rw)[0]


def write_png(path, pixels):
    Image.fromarray(np.ascontiguousarray(pixels)).save(path, format="PNG")
    return path


def write_spec(path, spec: ChartSpec):
    path.write_text(json.dumps(spec.model_dump(mode="json")), encoding="utf-8")
    return path


@pytest.fixture
def bar_spec():
    return make_spec(ChartType.BAR)


@pytest.fixture
def line_spec():
    return make_spec(ChartType.LINE)


@pytest.fixture
def pie_spec():
    return make_spec(ChartType.PIE)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
