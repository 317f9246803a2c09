"""Command-line entry point.

One run directory holds one pipeline's artifacts, organized as stage
subdirectories plus a manifest, so the files belonging to a single
experiment stay associated:

    out/
      manifest.json
      synth/      transactions.csv, rings.json
      ingest/     features.csv, features.csv.meta.json
      corpus/     sentences.txt
      embed/      vectors.txt, losses.json
      augment/    augmented.csv, augmented.csv.meta.json, report.json
      train/      model.json
      evaluate/   metrics.json
      pipeline/   vectors.txt, report.csv, report.txt, augmentation.json

Every stage writes ``effective_config.json`` (defaults merged with file
and flag overrides) next to its artifacts.  Nothing written here embeds
timestamps, so a rerun with identical config and seeds reproduces every
file byte for byte.  Exit codes: 0 success, 2 config error, 3 data
error, 4 stage failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .classify import ModelSpec, make_params, normalize_kind, train_model
from .config import PipelineConfig
from .corpus import build_sentences, load_sentences, save_sentences
from .embed import load_vectors, save_vectors, train
from .errors import ConfigError, DataError, PipelineError
from .evaluation import evaluate_model, run_groups
from .ingest import (
    EMBEDDING_MODE,
    build_feature_table,
    generate_synthetic,
    load_feature_table,
    parse_transactions,
    planted_rings,
    save_feature_table,
    save_transactions_csv,
)
from .simaug import relabel_by_similarity, smote
from .classify.persist import load_model, save_model

log = logging.getLogger("custspace")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="custspace",
        description="Customer-embedding feature pipeline for transaction fraud tables.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", type=Path, default=None, help="YAML or JSON config file")
        p.add_argument("--seed", type=int, default=None, help="override every section seed")
        p.add_argument("--out", type=Path, default=None, help="run directory (default ./run)")
        p.add_argument(
            "--threads",
            type=int,
            default=None,
            help="worker threads for embedding training; 0 = deterministic single-threaded",
        )

    p = sub.add_parser("synth", help="generate a synthetic transaction corpus")
    add_common(p)

    p = sub.add_parser("ingest", help="parse transactions and build the feature table")
    add_common(p)
    p.add_argument("--input", type=Path, default=None, help="transaction CSV path")
    p.add_argument("--vectors", type=Path, default=None, help="vector file for embedding mode")

    p = sub.add_parser("corpus", help="build grouped co-occurrence sentences")
    add_common(p)
    p.add_argument("--input", type=Path, default=None, help="transaction CSV path")

    p = sub.add_parser("embed", help="train customer embeddings on sentences")
    add_common(p)
    p.add_argument("--sentences", type=Path, default=None, help="sentence file path")

    p = sub.add_parser("augment", help="relabel by similarity or oversample with SMOTE")
    add_common(p)
    p.add_argument("--table", type=Path, default=None, help="feature table CSV path")
    p.add_argument("--vectors", type=Path, default=None, help="vector file (relabel method)")
    p.add_argument("--method", choices=("relabel", "smote"), default="relabel")

    p = sub.add_parser("train", help="train one classifier on a feature table")
    add_common(p)
    p.add_argument("--table", type=Path, default=None, help="feature table CSV path")
    p.add_argument("--kind", default=None, help="model kind (DT, RF, LR, KNN, MLP)")

    p = sub.add_parser("evaluate", help="score a saved model against a labeled table")
    add_common(p)
    p.add_argument("--model", type=Path, default=None, help="saved model path")
    p.add_argument("--table", type=Path, default=None, help="feature table CSV path")

    p = sub.add_parser("pipeline", help="run the four-group experiment end to end")
    add_common(p)
    p.add_argument("--input", type=Path, default=None, help="transaction CSV path")

    return parser


def _load_config(args) -> PipelineConfig:
    if args.config is not None:
        cfg = PipelineConfig.from_file(args.config)
    else:
        cfg = PipelineConfig()
    cfg.apply_overrides(
        seed=args.seed,
        threads=args.threads,
        output=str(args.out) if args.out is not None else None,
        input_path=str(getattr(args, "input", None)) if getattr(args, "input", None) else None,
    )
    return cfg


def _run_dir(cfg: PipelineConfig) -> Path:
    return Path(cfg.output) if cfg.output else Path("run")


def _stage_dir(run_dir: Path, stage: str) -> Path:
    d = run_dir / stage
    d.mkdir(parents=True, exist_ok=True)
    return d


def _write_json(path: Path, payload) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _log_effective_config(stage_dir: Path, cfg: PipelineConfig) -> None:
    payload = cfg.to_dict()
    payload["config_digest"] = cfg.digest()
    _write_json(stage_dir / "effective_config.json", payload)


def _update_manifest(run_dir: Path, stage: str, artifacts: list[str], cfg: PipelineConfig) -> None:
    manifest_path = run_dir / "manifest.json"
    manifest = {"stages": {}}
    if manifest_path.is_file():
        try:
            manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
        except json.JSONDecodeError:
            manifest = {"stages": {}}
    stages = manifest.setdefault("stages", {})
    stages[stage] = {
        "artifacts": sorted(artifacts + ["effective_config.json"]),
        "config_digest": cfg.digest(),
    }
    _write_json(manifest_path, manifest)


def _finish_stage(run_dir: Path, stage: str, cfg: PipelineConfig, artifacts: list[str]) -> None:
    stage_dir = run_dir / stage
    _log_effective_config(stage_dir, cfg)
    failed = stage_dir / "FAILED"
    if failed.exists():
        failed.unlink()
    _update_manifest(run_dir, stage, artifacts, cfg)
    for name in artifacts:
        log.info("%s: wrote %s", stage, stage_dir / name)


def _mark_failed(run_dir: Path, stage: str, exc: BaseException) -> None:
    stage_dir = run_dir / stage
    if stage_dir.is_dir():
        try:
            (stage_dir / "FAILED").write_text(
                f"stage {stage} failed: {exc}\nartifacts in this directory are partial\n",
                encoding="utf-8",
            )
        except OSError:
            pass


def _load_transactions(cfg: PipelineConfig, run_dir: Path, stage: str):
    """Transactions for a stage: explicit input path, else synth config, else synth artifact."""
    if cfg.input_path:
        if not Path(cfg.input_path).is_file():
            raise DataError(f"input file not found: {cfg.input_path}")
        result = parse_transactions(cfg.input_path)
        if result.skipped:
            log.warning(
                "%s: skipped %d malformed rows out of %d", stage, result.skipped, result.total_rows
            )
        if not result.records:
            raise DataError(f"no usable transactions in {cfg.input_path}")
        return result.records
    if cfg.synthetic is not None:
        return generate_synthetic(cfg.synthetic)
    default = run_dir / "synth" / "transactions.csv"
    if default.is_file():
        return parse_transactions(default).records
    raise ConfigError(
        "no transaction source: set 'input', provide a 'synthetic' section, or run synth first"
    )


def _embedding_space_for(cfg: PipelineConfig, run_dir: Path, vectors_arg: Path | None):
    path = vectors_arg or (run_dir / "embed" / "vectors.txt")
    if not Path(path).is_file():
        raise DataError(f"vector file not found: {path} (run embed first or pass --vectors)")
    return load_vectors(path)


def _table_for(args, cfg: PipelineConfig, run_dir: Path) -> tuple:
    path = getattr(args, "table", None) or (run_dir / "ingest" / "features.csv")
    if not Path(path).is_file():
        raise DataError(f"feature table not found: {path} (run ingest first or pass --table)")
    return load_feature_table(path), Path(path)


def _cmd_synth(args, cfg: PipelineConfig, run_dir: Path) -> None:
    if cfg.synthetic is None:
        raise ConfigError("synth requires a 'synthetic' config section")
    stage_dir = _stage_dir(run_dir, "synth")
    transactions = generate_synthetic(cfg.synthetic)
    save_transactions_csv(transactions, stage_dir / "transactions.csv")
    _write_json(stage_dir / "rings.json", {"rings": planted_rings(cfg.synthetic)})
    log.info("synth: %d transactions, %d rings", len(transactions), cfg.synthetic.n_rings)
    _finish_stage(run_dir, "synth", cfg, ["transactions.csv", "rings.json"])


def _cmd_ingest(args, cfg: PipelineConfig, run_dir: Path) -> None:
    stage_dir = _stage_dir(run_dir, "ingest")
    transactions = _load_transactions(cfg, run_dir, "ingest")
    if cfg.feature_mode == EMBEDDING_MODE:
        space = _embedding_space_for(cfg, run_dir, args.vectors)
        table = build_feature_table(transactions, mode=EMBEDDING_MODE, space=space)
    else:
        table = build_feature_table(transactions)
    save_feature_table(table, stage_dir / "features.csv")
    log.info(
        "ingest: %d rows, %d columns, %d positive",
        table.rows.shape[0], table.rows.shape[1], int(table.labels.sum()),
    )
    _finish_stage(run_dir, "ingest", cfg, ["features.csv", "features.csv.meta.json"])


def _cmd_corpus(args, cfg: PipelineConfig, run_dir: Path) -> None:
    stage_dir = _stage_dir(run_dir, "corpus")
    transactions = _load_transactions(cfg, run_dir, "corpus")
    corpus = build_sentences(transactions)
    save_sentences(corpus, stage_dir / "sentences.txt")
    log.info("corpus: %d sentences, %d tokens", len(corpus.sentences), corpus.n_tokens)
    _finish_stage(run_dir, "corpus", cfg, ["sentences.txt"])


def _cmd_embed(args, cfg: PipelineConfig, run_dir: Path) -> None:
    stage_dir = _stage_dir(run_dir, "embed")
    sentences_path = args.sentences or (run_dir / "corpus" / "sentences.txt")
    if Path(sentences_path).is_file():
        corpus = load_sentences(sentences_path)
    else:
        log.info("embed: no sentence file at %s, building from transactions", sentences_path)
        corpus = build_sentences(_load_transactions(cfg, run_dir, "embed"))
    space = train(corpus, cfg.embed)
    save_vectors(space, stage_dir / "vectors.txt")
    _write_json(stage_dir / "losses.json", {"epoch_losses": space.epoch_losses})
    log.info(
        "embed: %d tokens, dim %d, final loss %.6f",
        len(space.vocab.tokens), space.dim,
        space.epoch_losses[-1] if space.epoch_losses else float("nan"),
    )
    _finish_stage(run_dir, "embed", cfg, ["vectors.txt", "losses.json"])


def _cmd_augment(args, cfg: PipelineConfig, run_dir: Path) -> None:
    stage_dir = _stage_dir(run_dir, "augment")
    table, _ = _table_for(args, cfg, run_dir)
    if args.method == "relabel":
        space = _embedding_space_for(cfg, run_dir, args.vectors)
        augmented, report = relabel_by_similarity(table, space, tau=cfg.augment.tau)
    else:
        extra = cfg.augment.smote_extra
        if extra is None:
            extra = int(table.labels.sum())
        augmented, report = smote(
            table, k=cfg.augment.smote_k, n_synthetic=extra, seed=cfg.augment.seed
        )
    save_feature_table(augmented, stage_dir / "augmented.csv")
    _write_json(stage_dir / "report.json", report.to_dict())
    log.info(
        "augment(%s): positives %d -> %d, rows %d -> %d",
        args.method, report.positives_before, report.positives_after,
        report.rows_before, report.rows_after,
    )
    _finish_stage(
        run_dir, "augment", cfg, ["augmented.csv", "augmented.csv.meta.json", "report.json"]
    )


def _cmd_train(args, cfg: PipelineConfig, run_dir: Path) -> None:
    stage_dir = _stage_dir(run_dir, "train")
    table, _ = _table_for(args, cfg, run_dir)
    kind = normalize_kind(args.kind) if args.kind else cfg.models[0]
    params = make_params(kind, cfg.model_params.get(kind, {}))
    model = train_model(ModelSpec(kind, params), table.rows, table.labels, table.column_names)
    save_model(model, stage_dir / "model.json")
    log.info("train: %s on %d rows, %d columns", kind, table.rows.shape[0], table.rows.shape[1])
    _finish_stage(run_dir, "train", cfg, ["model.json"])


def _cmd_evaluate(args, cfg: PipelineConfig, run_dir: Path) -> None:
    stage_dir = _stage_dir(run_dir, "evaluate")
    model_path = args.model or (run_dir / "train" / "model.json")
    if not Path(model_path).is_file():
        raise DataError(f"model file not found: {model_path} (run train first or pass --model)")
    model = load_model(model_path)
    table, table_path = _table_for(args, cfg, run_dir)
    positive, macro = evaluate_model(model, table)
    payload = {
        "model": model.kind,
        "table": str(table_path),
        "rows": int(table.rows.shape[0]),
        "positive": {
            "precision": positive.precision, "recall": positive.recall, "f1": positive.f1,
        },
        "macro": {"precision": macro.precision, "recall": macro.recall, "f1": macro.f1},
    }
    _write_json(stage_dir / "metrics.json", payload)
    log.info(
        "evaluate: %s positive f1 %.4f (precision %.4f, recall %.4f)",
        model.kind, positive.f1, positive.precision, positive.recall,
    )
    _finish_stage(run_dir, "evaluate", cfg, ["metrics.json"])


def _cmd_pipeline(args, cfg: PipelineConfig, run_dir: Path) -> None:
    stage_dir = _stage_dir(run_dir, "pipeline")
    transactions = _load_transactions(cfg, run_dir, "pipeline")
    log.info("pipeline: %d transactions", len(transactions))

    corpus = build_sentences(transactions)
    space = train(corpus, cfg.embed)
    save_vectors(space, stage_dir / "vectors.txt")
    log.info("pipeline: embeddings trained, %d tokens in vocabulary", len(space.vocab.tokens))

    specs = [
        ModelSpec(kind, make_params(kind, cfg.model_params.get(kind, {})))
        for kind in cfg.models
    ]
    report = run_groups(
        transactions,
        embed_config=cfg.embed,
        augment_config=cfg.augment,
        model_specs=specs,
        split_config=cfg.split,
        keep_category_in_group2=cfg.keep_category_in_group2,
        space=space,
    )
    report.save_csv(stage_dir / "report.csv")
    report.save_text(stage_dir / "report.txt")
    _write_json(
        stage_dir / "augmentation.json",
        {str(group): rep.to_dict() for group, rep in report.augmentation.items()},
    )
    for row in report.rows:
        log.info(
            "pipeline: group %d %s f1 %.4f", row.group, row.model, row.f1,
        )
    _finish_stage(
        run_dir, "pipeline", cfg,
        ["vectors.txt", "report.csv", "report.txt", "augmentation.json"],
    )


_HANDLERS = {
    "synth": _cmd_synth,
    "ingest": _cmd_ingest,
    "corpus": _cmd_corpus,
    "embed": _cmd_embed,
    "augment": _cmd_augment,
    "train": _cmd_train,
    "evaluate": _cmd_evaluate,
    "pipeline": _cmd_pipeline,
}


def execute(argv: list[str] | None = None) -> int:
    """Run one subcommand; returns the process exit code."""
    parser = _build_parser()
    args = parser.parse_args(argv)
    command = args.command
    run_dir: Path | None = None
    try:
        cfg = _load_config(args)
        run_dir = _run_dir(cfg)
        run_dir.mkdir(parents=True, exist_ok=True)
        _HANDLERS[command](args, cfg, run_dir)
        return 0
    except ConfigError as exc:
        log.error("config error: %s", exc)
        return 2
    except DataError as exc:
        log.error("data error: %s", exc)
        if run_dir is not None:
            _mark_failed(run_dir, command, exc)
        return 3
    except PipelineError as exc:
        log.error("stage failure: %s", exc)
        if run_dir is not None:
            _mark_failed(run_dir, command, exc)
        return 4
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        log.exception("stage failure: %s", exc)
        if run_dir is not None:
            _mark_failed(run_dir, command, exc)
        return 4


def main() -> None:
    logging.basicConfig(
        stream=sys.stderr, level=logging.INFO, format="%(levelname)s %(name)s: %(message)s"
    )
    sys.exit(execute())


if __name__ == "__main__":
    main()
