"""Tests for run configuration, manifests and end-to-end pipeline runs."""

import filecmp
import json
import os
import sys

import attrs
import pytest

sys.path.append(os.path.dirname(os.path.dirname(__file__)))

from boxes.annotations import write_annotations  # noqa: E402
from config.pipeline_defaults import (  # noqa: E402
    FP_POINTS,
    LARGE_PATCH_SIZE,
    TARGET_SPACING,
)
from pipeline import (  # noqa: E402
    Manifest,
    ManifestEntry,
    PipelineConfig,
    load_config,
    load_manifest,
    run_pipeline,
    save_config,
    write_manifest,
)
from pipeline.runner import STAGES, stage  # noqa: E402
from utilities.errors import ConfigError, PipelineStageError  # noqa: E402
from volumes.mvol_io import save_volume  # noqa: E402
from volumes.phantom import generate_phantom, random_phantom_spec  # noqa: E402

SMALL_PATCH = (48, 48, 48)


def _phantom_dataset(folder, count=4, shape=(64, 64, 64)):
    """Write phantoms, their ground truth and a manifest; return its path."""
    entries, gt = [], {}
    for index in range(count):
        image_id = f"phantom_{index:03d}"
        spec = random_phantom_spec(
            shape,
            max_lesions=3,
            radius_range=(3, 8),
            seed=100 + index,
            spacing=TARGET_SPACING,
        )
        vol, boxes = generate_phantom(spec)
        path = save_volume(vol, os.path.join(folder, "volumes", image_id))
        entries.append(ManifestEntry(image_id, path))
        gt[image_id] = boxes
    gt_path = write_annotations(os.path.join(folder, "gt.csv"), gt)
    return write_manifest(
        os.path.join(folder, "manifest.json"),
        Manifest(entries, annotations=os.path.abspath(gt_path)),
    )


def _small_config(**changes):
    return attrs.evolve(PipelineConfig(patch_size=SMALL_PATCH), **changes)


# Configuration


def test_config_defaults():
    config = PipelineConfig()
    assert config.target_spacing == (1.40, 1.43, 1.43)
    assert config.spacing_tolerance == 0.05
    assert config.patch_size == LARGE_PATCH_SIZE == (192, 192, 192)
    assert config.eval_iou == (0.1, 0.3)
    assert config.fp_points == FP_POINTS
    assert config.augmentation_scheme == "A"


@pytest.mark.parametrize("name", ["run.yaml", "run.json"])
def test_config_round_trip(tmp_path, name):
    config = PipelineConfig(
        patch_size=(160, 128, 128),
        augmentation_scheme="B",
        eval_iou=(0.3,),
        seed=7,
        ensemble=True,
        ensemble_patch_size=(192, 192, 192),
        workers=2,
    )
    path = save_config(config, str(tmp_path / name))
    assert load_config(path) == config


def test_config_rejects_unknown_keys():
    with pytest.raises(ConfigError, match="unknown"):
        PipelineConfig.from_dict({"patch": [1, 2, 3]})


@pytest.mark.parametrize(
    "data",
    [
        {"tile_overlap": 1.0},
        {"eval_iou": []},
        {"augmentation_scheme": "C"},
        {"target_spacing": [1.0, 0.0, 1.0]},
        {"workers": 0},
    ],
)
def test_config_rejects_invalid_values(data):
    with pytest.raises(ConfigError):
        PipelineConfig.from_dict(data)


def test_config_file_errors(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        load_config(str(tmp_path / "missing.yaml"))
    broken = tmp_path / "broken.json"
    broken.write_text("{")
    with pytest.raises(ConfigError, match="cannot parse"):
        load_config(str(broken))


# Manifests


def test_manifest_resolves_relative_paths(tmp_path):
    manifest_path = tmp_path / "data" / "manifest.yaml"
    manifest_path.parent.mkdir()
    manifest_path.write_text(
        "annotations: gt.csv\n"
        "volumes:\n"
        "  - image_id: a\n"
        "    path: volumes/a.json\n"
    )
    manifest = load_manifest(str(manifest_path))
    assert manifest.image_ids == ["a"]
    assert manifest.volumes[0].path == str(tmp_path / "data" / "volumes/a.json")
    assert manifest.annotations == str(tmp_path / "data" / "gt.csv")


def test_manifest_written_relative(tmp_path):
    path = _phantom_dataset(str(tmp_path), count=2)
    with open(path, encoding="utf-8") as f:
        data = json.load(f)
    assert data["annotations"] == "gt.csv"
    assert data["volumes"][0]["path"] == os.path.join(
        "volumes", "phantom_000.json"
    )
    assert load_manifest(path).image_ids == ["phantom_000", "phantom_001"]


def test_manifest_errors(tmp_path):
    with pytest.raises(ConfigError):
        load_manifest(str(tmp_path / "absent.json"))
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"annotations": "gt.csv"}))
    with pytest.raises(ConfigError, match="volumes"):
        load_manifest(str(bad))
    with pytest.raises(ConfigError, match="twice"):
        Manifest([ManifestEntry("a", "x"), ManifestEntry("a", "y")])


# Pipeline runs


def test_phantom_run_scores_one(tmp_path):
    manifest = _phantom_dataset(str(tmp_path / "data"))
    run_dir = str(tmp_path / "run")
    report = run_pipeline(_small_config(), manifest, run_dir)
    assert report["scores"] == {"0.1": 1.0, "0.3": 1.0}
    assert report["n_images"] == 4
    for name in (
        "config.yaml",
        "gt_preprocessed.csv",
        "predictions_a.csv",
        "froc_iou_0.3.json",
        "froc_iou_0.3.tsv",
        "report.json",
        os.path.join("preprocessed", "phantom_000.json"),
        os.path.join("pseudomasks", "phantom_000.raw"),
    ):
        assert os.path.exists(os.path.join(run_dir, name)), name


def test_runs_are_byte_identical(tmp_path):
    manifest = _phantom_dataset(str(tmp_path / "data"), count=3)
    config = _small_config(augmentation_preview=True, augmentation_scheme="B")
    first, second = str(tmp_path / "first"), str(tmp_path / "second")
    run_pipeline(config, manifest, first)
    run_pipeline(attrs.evolve(config, workers=3), manifest, second)

    first_files = sorted(
        os.path.relpath(os.path.join(root, name), first)
        for root, _, names in os.walk(first)
        for name in names
    )
    assert os.path.join("augmented", "boxes.csv") in first_files
    for name in first_files:
        if name == "config.yaml":
            continue
        assert filecmp.cmp(
            os.path.join(first, name), os.path.join(second, name), shallow=False
        ), name


def test_self_ensemble_matches_single_model(tmp_path):
    manifest = _phantom_dataset(str(tmp_path / "data"), count=2)
    single = run_pipeline(_small_config(), manifest, str(tmp_path / "single"))
    fused = run_pipeline(
        _small_config(ensemble=True), manifest, str(tmp_path / "fused")
    )
    assert fused["predictions"] == "predictions_ensemble.csv"
    assert fused["scores"] == single["scores"]
    with open(tmp_path / "single" / "predictions_a.csv") as a, open(
        tmp_path / "fused" / "predictions_ensemble.csv"
    ) as b:
        assert a.read() == b.read()


def test_resampling_stage_rescales_ground_truth(tmp_path):
    manifest = _phantom_dataset(str(tmp_path / "data"), count=1)
    config = _small_config(target_spacing=(2.8, 1.43, 1.43))
    report = run_pipeline(config, manifest, str(tmp_path / "run"))
    with open(tmp_path / "run" / "preprocessed" / "phantom_000.json") as f:
        assert json.load(f)["shape"] == [32, 64, 64]
    assert report["n_gt"] >= 1


def test_failing_stage_is_named(tmp_path):
    manifest = Manifest(
        [ManifestEntry("ghost", str(tmp_path / "ghost.json"))], annotations=None
    )
    with pytest.raises(PipelineStageError) as info:
        run_pipeline(_small_config(), manifest, str(tmp_path / "run"))
    assert info.value.stage == "preprocess"
    assert "preprocess" in str(info.value)
    assert info.value.stage in STAGES


def test_stage_names_are_known():
    with stage("report"):
        pass
    with pytest.raises(ValueError, match="stage must be one of"):
        with stage("training"):
            pass


def test_missing_ground_truth_fails_evaluation(tmp_path):
    manifest_path = _phantom_dataset(str(tmp_path / "data"), count=1)
    manifest = attrs.evolve(load_manifest(manifest_path), annotations=None)
    with pytest.raises(PipelineStageError) as info:
        run_pipeline(_small_config(), manifest, str(tmp_path / "run"))
    assert info.value.stage == "evaluate"
