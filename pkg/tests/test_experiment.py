import json

import pytest

from claimlab.claims import load_claims
from claimlab.evaluation import recall_at_k
from claimlab.experiment import (
    ExperimentConfig,
    StageError,
    load_docs,
    load_selections,
    run_experiment,
)
from claimlab.worldgen import WorldConfig, build_world, write_world

SMALL_WORLD = WorldConfig(
    seed=21,
    n_persons=12,
    n_shows=12,
    n_networks=4,
    n_towns=12,
    train_supported=8,
    train_supported_single=1,
    train_refuted=5,
    train_refuted_single=1,
    train_nei=5,
    dev_supported=4,
    dev_supported_single=1,
    dev_refuted=4,
    dev_refuted_single=1,
    dev_nei=4,
)


@pytest.fixture(scope="module")
def world(tmp_path_factory):
    out = tmp_path_factory.mktemp("exp_world")
    write_world(build_world(SMALL_WORLD), out)
    return out


def config_for(world, out_dir, **kwargs):
    defaults = dict(
        corpus=str(world / "corpus"),
        train_claims=str(world / "train.jsonl"),
        dev_claims=str(world / "dev.jsonl"),
        kb=str(world / "kb.jsonl"),
        out_dir=str(out_dir),
        seed=5,
        k_docs=8,
    )
    defaults.update(kwargs)
    return ExperimentConfig(**defaults)


@pytest.fixture(scope="module")
def bundle(world, tmp_path_factory):
    out_dir = tmp_path_factory.mktemp("bundle")
    report = run_experiment(config_for(world, out_dir))
    return out_dir, report


def test_one_row_per_regime_per_dataset(bundle):
    _, report = bundle
    keys = [(row["regime"], row["dataset"]) for row in report["rows"]]
    assert len(keys) == len(set(keys))
    assert len(keys) == len(report["regimes"]) * 2


def test_reported_recall_matches_persisted_selections(bundle, world):
    """Numbers in the report must be recomputable from the artifact files."""
    out_dir, report = bundle
    dev = load_claims(world / "dev.jsonl")
    for row in report["rows"]:
        if row["dataset"] != "dev":
            continue
        selections = load_selections(out_dir / "selections" / f"dev_{row['regime']}.jsonl")
        predictions = {cid: [sid for sid, _ in ranked] for cid, ranked in selections.items()}
        assert recall_at_k(predictions, dev, row["k"]) == pytest.approx(row["recall_at_k"])


def test_manifest_lists_artifacts(bundle):
    out_dir, _ = bundle
    manifest = json.loads((out_dir / "manifest.json").read_text())
    assert "config_hash" in manifest
    assert "out_dir" not in manifest["config"]
    listed = set(manifest["artifacts"])
    assert "report.json" in listed
    assert any(name.startswith("models/") for name in listed)


def test_oracle_flag_appends_gold_pages(world, tmp_path):
    plain_dir = tmp_path / "plain"
    run_experiment(config_for(world, plain_dir, k_docs=1, oracle_docs=False, regimes=("baseline",)))
    oracle_dir = tmp_path / "oracle"
    run_experiment(config_for(world, oracle_dir, k_docs=1, oracle_docs=True, regimes=("baseline",)))
    plain = load_docs(plain_dir / "docs_dev.jsonl")
    oracle = load_docs(oracle_dir / "docs_dev.jsonl")
    dev = {c.claim_id: c for c in load_claims(world / "dev.jsonl")}
    assert any(set(oracle[cid]) - set(plain[cid]) for cid in oracle)
    for cid, claim in dev.items():
        for page in claim.gold_pages():
            assert page in oracle[cid]


def test_sr_absent_when_not_requested(world, tmp_path):
    report = run_experiment(config_for(world, tmp_path / "nobase", regimes=("baseline",)))
    assert all(row["regime"] == "baseline" for row in report["rows"])
    assert not (tmp_path / "nobase" / "selections" / "dev_sr.jsonl").exists()


def test_stage_error_carries_stage_name(tmp_path):
    config = ExperimentConfig(
        corpus=str(tmp_path / "missing"),
        train_claims="x",
        dev_claims="y",
        kb="z",
        out_dir=str(tmp_path / "out"),
    )
    with pytest.raises(StageError) as err:
        run_experiment(config)
    assert err.value.stage == "ingest"


def test_unknown_regime_rejected(tmp_path):
    with pytest.raises(ValueError, match="unknown regimes"):
        ExperimentConfig(
            corpus="c", train_claims="t", dev_claims="d", kb="k",
            out_dir=str(tmp_path), regimes=("baseline", "bogus"),
        )
