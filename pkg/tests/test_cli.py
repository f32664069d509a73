import json

import numpy as np
import pytest
from click.testing import CliRunner
from PIL import Image
from scipy.ndimage import binary_erosion

from conftest import make_spec, target_band0, write_png, write_spec
from pictochart.cli import cli
from pictochart.schemas.chart import ChartType
from pictochart.services.chart_model import normalize
from pictochart.storage.tensors import read_tensor


@pytest.fixture
def runner():
    return CliRunner(mix_stderr=False)


@pytest.fixture
def bar_files(tmp_path, bar_spec):
    return write_spec(tmp_path / "bar.json", bar_spec)


def _painted(region):
    pixels = np.zeros(region.shape + (4,), dtype=np.uint8)
    pixels[region] = (220, 40, 40, 255)
    return pixels


# skeleton

def test_skeleton_writes_png(runner, tmp_path, bar_files):
    out = tmp_path / "skel.png"
    result = runner.invoke(cli, ["skeleton", str(bar_files), "--out", str(out)])
    assert result.exit_code == 0, result.stderr
    with Image.open(out) as image:
        assert image.mode == "RGBA"
        assert image.size == (512, 512)


def test_skeleton_writes_token_indices(runner, tmp_path, bar_files):
    indices = tmp_path / "indices.json"
    result = runner.invoke(cli, [
        "skeleton", str(bar_files), "--out", str(tmp_path / "s.png"),
        "--latent-dims", "8x8", "--indices", str(indices),
    ])
    assert result.exit_code == 0, result.stderr
    document = json.loads(indices.read_text())
    assert document["grid_dims"] == [8, 8]
    assert document["indices"] and all(0 <= i < 64 for i in document["indices"])


def test_skeleton_rejects_malformed_spec(runner, tmp_path):
    (tmp_path / "bad.json").write_text("{oops", encoding="utf-8")
    result = runner.invoke(cli, ["skeleton", str(tmp_path / "bad.json"), "--out", str(tmp_path / "s.png")])
    assert result.exit_code == 2
    assert "Error" in result.stderr
    assert not (tmp_path / "s.png").exists()


def test_skeleton_rejects_zero_stroke(runner, tmp_path, bar_files):
    result = runner.invoke(cli, ["skeleton", str(bar_files), "--out", str(tmp_path / "s.png"), "--stroke-px", "0"])
    assert result.exit_code == 2


def test_skeleton_missing_spec_is_io_error(runner, tmp_path):
    result = runner.invoke(cli, ["skeleton", str(tmp_path / "none.json"), "--out", str(tmp_path / "s.png")])
    assert result.exit_code == 3


# score

def test_score_compensated_band_zero_chart(runner, tmp_path, bar_spec, bar_files):
    # erosionar 13x13 deshace la dilatación del desenfoque
    _, _, band0 = target_band0(normalize(bar_spec))
    eroded = binary_erosion(band0, structure=np.ones((13, 13), dtype=bool))
    image = write_png(tmp_path / "chart.png", _painted(eroded))
    result = runner.invoke(cli, ["score", str(image), str(bar_files), "--points-per-band", "2000"])
    assert result.exit_code == 0, result.stderr
    report = json.loads(result.output)
    assert report["f1"] >= 0.99
    assert report["method"] == "sampled"
    assert report["seed"] == 0


def test_score_literal_band_zero_chart(runner, tmp_path, bar_spec, bar_files):
    _, _, band0 = target_band0(normalize(bar_spec))
    image = write_png(tmp_path / "chart.png", _painted(band0))
    result = runner.invoke(cli, ["score", str(image), str(bar_files), "--exhaustive"])
    assert result.exit_code == 0, result.stderr
    report = json.loads(result.output)
    assert report["weighted_recall"] == 1.0
    assert 0.75 <= report["f1"] < 0.99


def test_score_blank_chart_is_zero(runner, tmp_path, bar_files):
    image = write_png(tmp_path / "blank.png", np.zeros((512, 512, 4), dtype=np.uint8))
    result = runner.invoke(cli, ["score", str(image), str(bar_files), "--points-per-band", "100"])
    assert result.exit_code == 0, result.stderr
    report = json.loads(result.output)
    assert report["f1"] == 0.0
    assert report["weighted_precision"] == report["weighted_recall"] == 0.0


def test_score_rejects_images_without_alpha(runner, tmp_path, bar_files):
    Image.new("RGB", (512, 512), (255, 0, 0)).save(tmp_path / "photo.jpg", format="JPEG")
    result = runner.invoke(cli, ["score", str(tmp_path / "photo.jpg"), str(bar_files)])
    assert result.exit_code == 4
    assert "alfa" in result.stderr


def test_score_exhaustive_and_debug_field(runner, tmp_path, line_spec):
    spec = write_spec(tmp_path / "line.json", line_spec)
    _, _, band0 = target_band0(normalize(line_spec))
    image = write_png(tmp_path / "chart.png", _painted(band0))
    dump = tmp_path / "field.png"
    result = runner.invoke(cli, ["score", str(image), str(spec), "--exhaustive", "--debug-field", str(dump)])
    assert result.exit_code == 0, result.stderr
    report = json.loads(result.output)
    assert report["method"] == "exhaustive"
    assert report["seed"] is None
    assert 0.0 < report["f1"] <= 1.0
    with Image.open(dump) as image:
        assert image.size == (512, 512)


def test_score_custom_bands(runner, tmp_path, bar_files):
    image = write_png(tmp_path / "blank.png", np.zeros((512, 512, 4), dtype=np.uint8))
    result = runner.invoke(cli, [
        "score", str(image), str(bar_files), "--band-edges", "4,16", "--weights", "1,0.3,0.1",
    ])
    assert result.exit_code == 0, result.stderr
    report = json.loads(result.output)
    assert report["band_edges"] == [4.0, 16.0]
    assert report["weights"] == [1.0, 0.3, 0.1]


def test_score_rejects_unbalanced_bands(runner, tmp_path, bar_files):
    image = write_png(tmp_path / "blank.png", np.zeros((512, 512, 4), dtype=np.uint8))
    result = runner.invoke(cli, ["score", str(image), str(bar_files), "--band-edges", "4,16", "--weights", "1,0.3"])
    assert result.exit_code == 2


def test_score_reads_yaml_config(runner, tmp_path, bar_files):
    image = write_png(tmp_path / "blank.png", np.zeros((512, 512, 4), dtype=np.uint8))
    (tmp_path / "run.yaml").write_text("seed: 17\npoints_per_band: 150\n", encoding="utf-8")
    result = runner.invoke(cli, ["score", str(image), str(bar_files), "--config", str(tmp_path / "run.yaml")])
    assert result.exit_code == 0, result.stderr
    report = json.loads(result.output)
    assert report["seed"] == 17
    assert report["points_per_band"] == 150


def test_score_rejects_negative_seed_in_config(runner, tmp_path, bar_files):
    image = write_png(tmp_path / "blank.png", np.zeros((512, 512, 4), dtype=np.uint8))
    (tmp_path / "run.yaml").write_text("seed: -3\n", encoding="utf-8")
    result = runner.invoke(cli, ["score", str(image), str(bar_files), "--config", str(tmp_path / "run.yaml")])
    assert result.exit_code == 2
    assert "seed" in result.stderr


# batch

def _small_rows(tmp_path, count):
    rng = np.random.default_rng(2)
    rows = []
    for i in range(count):
        chart_type = list(ChartType)[i % 3]
        spec = make_spec(chart_type, [["a", 3], ["b", 5], ["c", 2]], canvas=(64, 64), margin=4)
        write_spec(tmp_path / f"s{i}.json", spec)
        pixels = np.zeros((64, 64, 4), dtype=np.uint8)
        pixels[..., 3] = (rng.random((64, 64)) < 0.1) * 255
        write_png(tmp_path / f"c{i}.png", pixels)
        rows.append(f"c{i}.png,s{i}.json")
    return rows


def test_batch_reports_missing_rows(runner, tmp_path):
    rows = _small_rows(tmp_path, 2) + ["absent.png,s0.json"]
    manifest = tmp_path / "manifest.csv"
    manifest.write_text("image_path,spec_path\n" + "\n".join(rows) + "\n", encoding="utf-8")
    result = runner.invoke(cli, ["batch", str(manifest), "--points-per-band", "100"])
    assert result.exit_code == 0, result.stderr
    lines = result.output.splitlines()
    assert len(lines) == 4
    assert lines[0].startswith("path,chart_type,f1,precision,recall,seed,status")
    assert [line.split(",")[6] for line in lines[1:]] == ["ok", "ok", "missing"]
    assert "mean_f1[bar]=" in result.stderr
    assert "mean_f1[line]=" in result.stderr


def test_batch_writes_out_file(runner, tmp_path):
    manifest = tmp_path / "manifest.csv"
    manifest.write_text("image_path,spec_path\n" + "\n".join(_small_rows(tmp_path, 3)) + "\n", encoding="utf-8")
    out = tmp_path / "results.csv"
    result = runner.invoke(cli, ["batch", str(manifest), "--out", str(out), "--points-per-band", "100"])
    assert result.exit_code == 0, result.stderr
    assert result.output == ""
    assert len(out.read_text(encoding="utf-8").splitlines()) == 4


def test_batch_empty_manifest(runner, tmp_path):
    manifest = tmp_path / "manifest.csv"
    manifest.write_text("image_path,spec_path\n", encoding="utf-8")
    result = runner.invoke(cli, ["batch", str(manifest)])
    assert result.exit_code == 0
    assert len(result.output.splitlines()) == 1
    assert result.output.startswith("path,")


def test_batch_all_rows_failing(runner, tmp_path):
    manifest = tmp_path / "manifest.csv"
    manifest.write_text("image_path,spec_path\nx.png,x.json\ny.png,y.json\n", encoding="utf-8")
    result = runner.invoke(cli, ["batch", str(manifest)])
    assert result.exit_code == 2
    assert len(result.output.splitlines()) == 3


# gate

@pytest.fixture
def bundle(tmp_path):
    document = {
        "q_s": [[1.0, 0.0], [0.0, 1.0]],
        "k_x": [[1.0, 0.0], [0.0, 1.0], [1.0, 1.0], [0.0, 0.0]],
        "q_x": [[1.0, 0.0], [0.0, 1.0], [0.5, 0.5], [0.0, 0.0]],
        "k_r": [[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]],
        "index_set": [1],
    }
    path = tmp_path / "bundle.json"
    path.write_text(json.dumps(document), encoding="utf-8")
    return path


def test_gate_summary_and_tensors(runner, tmp_path, bundle):
    weights = tmp_path / "w.bin"
    result = runner.invoke(cli, ["gate", str(bundle), "--beta", "0.4", "--out-weights", str(weights)])
    assert result.exit_code == 0, result.stderr
    summary = json.loads(result.output)
    assert summary["beta"] == 0.4
    assert (summary["n_x"], summary["n_r"], summary["index_set_size"]) == (4, 3, 1)
    assert max(summary["mask"]) == pytest.approx(1.0)
    gated = read_tensor(weights)
    assert gated.shape == (4, 3)
    assert np.allclose(gated.sum(axis=1), 1.0, atol=1e-6)


def test_gate_beta_sweep(runner, bundle):
    result = runner.invoke(cli, ["gate", str(bundle), "--beta-sweep", "0,0.5,1"])
    assert result.exit_code == 0, result.stderr
    rows = json.loads(result.output)
    assert [row["beta"] for row in rows] == [0.0, 0.5, 1.0]
    masses = [row["mass"] for row in rows]
    assert masses == sorted(masses)
    assert masses[-1] == pytest.approx(4.0)


def test_gate_rejects_out_of_range_beta(runner, bundle):
    assert runner.invoke(cli, ["gate", str(bundle), "--beta", "1.5"]).exit_code == 2
    assert runner.invoke(cli, ["gate", str(bundle), "--beta-sweep", "0.2,1.5"]).exit_code == 2


# assemble

def test_assemble_with_log(runner, tmp_path):
    rows = np.arange(500)
    pixels = np.zeros((500, 40, 4), dtype=np.uint8)
    pixels[..., 0] = np.where(rows % 10 < 5, 30, 220)[:, None]
    pixels[..., 3] = 255
    source = write_png(tmp_path / "ref.png", pixels)
    out, log = tmp_path / "out.png", tmp_path / "log.json"
    result = runner.invoke(cli, [
        "assemble", "--input", str(source), "--target-height", "700", "--out", str(out), "--log", str(log),
    ])
    assert result.exit_code == 0, result.stderr
    document = json.loads(log.read_text())
    assert document["source_height_px"] == 500
    assert document["achieved_height_px"] == 700
    assert document["ops_log"] == [{"op": "replicate", "grid_id": document["plan"]["ranking"][0], "count": 2}]
    with Image.open(out) as image:
        assert image.size == (40, 700)


def test_assemble_target_too_small(runner, tmp_path):
    pixels = np.full((500, 40, 4), 255, dtype=np.uint8)
    source = write_png(tmp_path / "ref.png", pixels)
    result = runner.invoke(cli, [
        "assemble", "--input", str(source), "--target-height", "50", "--out", str(tmp_path / "o.png"),
    ])
    assert result.exit_code == 2
