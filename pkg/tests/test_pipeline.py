import json

import pytest

from jobmarket.config import SEED_OFFSETS, PipelineConfig
from jobmarket.errors import DependencyError, StaleArtifactError, ValidationError
from jobmarket.pipeline import STAGES, Pipeline


def _pipe(tmp_path, config_path, **kw):
    return Pipeline(PipelineConfig.load(config_path, out_dir=str(tmp_path)), **kw)


def test_missing_upstream_names_featurize(tmp_path, small_config_path):
    pipe = _pipe(tmp_path, small_config_path)
    pipe.run_stage("generate")
    pipe.run_stage("preprocess")
    with pytest.raises(DependencyError) as exc:
        pipe.run_stage("train-regression")
    assert exc.value.stage == "featurize"
    assert "featurize" in str(exc.value)


def test_first_missing_stage_is_reported(tmp_path, small_config_path):
    with pytest.raises(DependencyError, match="'generate'"):
        _pipe(tmp_path, small_config_path).run_stage("preprocess")


def test_summary_shape(small_run):
    _, summary = small_run
    assert len(summary["regression"]) == 4
    assert len(summary["classification"]) == 4
    assert len(summary["clustering"]) == 6
    assert {r["feature_set"] for r in summary["regression"]} == {"structured", "embed", "tfidf", "combined"}
    assert "out_dir" not in summary["config"]


def test_every_output_is_in_a_manifest(small_run):
    pipe, summary = small_run
    listed = set()
    for stage in STAGES:
        doc = pipe.read_manifest(stage)
        assert doc["status"] == "complete"
        listed |= {f"{stage}/{rel}" for rel in doc["outputs"]}
        pipe.verified_outputs(stage)
    on_disk = {p.relative_to(pipe.root).as_posix() for p in pipe.root.rglob("*")
               if p.is_file() and p.name != "manifest.json"}
    assert on_disk == listed
    assert set(summary["figures"]) <= listed
    run = json.loads((pipe.root / "manifest.json").read_text())
    assert run["status"] == "complete" and set(run["stages"]) == set(STAGES)


def test_rerun_is_noop_and_forced_rerun_identical(small_run):
    pipe, _ = small_run
    again = Pipeline(pipe.config)
    for stage in ("generate", "featurize", "cluster"):
        res = again.run_stage(stage)
        assert res.status == "up to date"
    before = pipe.read_manifest("featurize")["outputs"]
    forced = Pipeline(pipe.config, force=True).run_stage("featurize")
    assert forced.status == "ran"
    assert forced.outputs == before


def test_tampered_output_is_stale(tmp_path, small_config_path):
    pipe = _pipe(tmp_path, small_config_path)
    pipe.run_stage("generate")
    with (tmp_path / "generate" / "listings.csv").open("a") as fh:
        fh.write("\n")
    with pytest.raises(StaleArtifactError):
        pipe.run_stage("preprocess")
    # the stage itself is not up to date any more, so it reruns
    assert Pipeline(pipe.config).run_stage("generate").status == "ran"
    assert pipe.run_stage("preprocess").status == "ran"


def test_changed_config_is_stale(tmp_path, small_config_path):
    _pipe(tmp_path, small_config_path).run_stage("generate")
    other = Pipeline(PipelineConfig.load(small_config_path, out_dir=str(tmp_path), seed=43))
    with pytest.raises(StaleArtifactError):
        other.run_stage("preprocess")


def test_failure_writes_partial_manifest(tmp_path, small_config_path, monkeypatch):
    pipe = _pipe(tmp_path, small_config_path)

    def boom(self, out):
        raise ValidationError("synthetic failure")

    monkeypatch.setattr(Pipeline, "_run_preprocess", boom)
    with pytest.raises(ValidationError):
        pipe.run_paper_matrix()
    run = json.loads((tmp_path / "manifest.json").read_text())
    assert run["status"] == "failed" and run["failed_stage"] == "preprocess"
    assert "generate" in run["stages"]


def test_stage_seeds_are_offsets_of_master_seed():
    cfg = PipelineConfig.load(seed=1000)
    assert {k: cfg.stage_seed(k) for k in SEED_OFFSETS} == {k: 1000 + v for k, v in SEED_OFFSETS.items()}
    assert PipelineConfig.load(seed=1000).stage_seed("cluster") == cfg.stage_seed("cluster")


def test_config_validation(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"grids": {"alpha": "lots"}}))
    with pytest.raises(ValidationError):
        PipelineConfig.load(bad)
    bad.write_text(json.dumps({"colour": 1}))
    with pytest.raises(ValidationError, match="colour"):
        PipelineConfig.load(bad)
    bad.write_text("{not json")
    with pytest.raises(ValidationError):
        PipelineConfig.load(bad)


def test_fingerprint_ignores_out_dir():
    a = PipelineConfig.load(out_dir="/a")
    b = PipelineConfig.load(out_dir="/b")
    assert a.fingerprint() == b.fingerprint()
    assert a.fingerprint() != PipelineConfig.load(seed=1).fingerprint()
