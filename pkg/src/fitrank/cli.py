"""Command-line entry point: ``fitrank <command> --out DIR [options]``.

Commands: extract, train-lda, select-types, rank, eval, sweep-d. Options
override the values of an optional JSON ``--config`` file. Every command
writes into the run directory ``--out`` and records its configuration
digest in ``manifest.json`` there.

Exit status: 0 on success, 2 for usage or configuration errors, 1 when a
run fails.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .corpus import Corpus, extract_candidates, load_lexicon, read_documents, write_candidates
from .evaluation import evaluate_corpus, format_table, load_gold
from .pipeline import (METHODS, RANKERS, ConfigError, PipelineConfig, check_inputs, load_resources,
                       rank_corpus, ranking_tsv, read_ranking_tsv, require, safe_name, write_atomic)
from .rankers import select_preferred_types
from .topics import train_lda

log = logging.getLogger("fitrank")


def _csv(kind):
    def parse(text):
        try:
            return [kind(x) for x in text.split(",") if x.strip()]
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad list {text!r}") from None
    return parse


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    S = argparse.SUPPRESS
    common.add_argument("--config", help="JSON config file")
    common.add_argument("--out", required=True, help="run directory")
    for name in ("corpus", "background", "lexicon", "gold", "external-scores", "topic-model",
                 "candidates", "preferred-types"):
        common.add_argument(f"--{name}", default=S)
    common.add_argument("--window", type=int, default=S)
    common.add_argument("--damping", type=float, default=S)
    common.add_argument("--d", type=float, default=S, help="FIT mixing weight")
    common.add_argument("--rrf-k", type=float, default=S)
    common.add_argument("--familiarity-threshold", type=float, default=S)
    common.add_argument("-K", "--topics", dest="K", type=int, default=S)
    common.add_argument("--lda-iterations", type=int, default=S)
    common.add_argument("--infer-iterations", type=int, default=S)
    common.add_argument("--alpha", type=float, default=S)
    common.add_argument("--beta", type=float, default=S)
    common.add_argument("--seed", type=int, default=S)
    common.add_argument("--tol", type=float, default=S)
    common.add_argument("--max-iter", type=int, default=S)
    common.add_argument("--disable", action="append", choices=RANKERS, default=S,
                        help="turn off a single ranker (repeatable)")
    common.add_argument("--jobs", type=int, default=S)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="fitrank", description="Rank candidate terms within documents.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("extract", parents=[common], help="write candidate terms per document")
    sub.add_parser("train-lda", parents=[common], help="train and save the topic model")
    sub.add_parser("select-types", parents=[common], help="choose preferred semantic types")
    for name, text in (("rank", "write ranking TSVs"), ("eval", "evaluate against gold terms")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--method", choices=METHODS, default=S)
        if name == "eval":
            p.add_argument("--n", dest="ns", type=_csv(int), default=S, help="cut-offs, e.g. 5,10")
            p.add_argument("--rankings", help="evaluate ranking TSVs from this directory")
    p = sub.add_parser("sweep-d", parents=[common], help="evaluate FIT over a grid of d")
    p.add_argument("--d-values", type=_csv(float), default=S, help="e.g. 0,0.5,1")
    p.add_argument("--n", dest="ns", type=_csv(int), default=S)
    return parser


def make_config(args) -> PipelineConfig:
    cfg = PipelineConfig.load(args.config) if args.config else PipelineConfig()
    skip = {"config", "out", "verbose", "command", "rankings", "disable"}
    for key, value in vars(args).items():
        if key in skip:
            continue
        key = key.replace("-", "_")
        if key == "preferred_types" and not Path(value).exists():
            value = [v.strip() for v in value.split(",")]
        setattr(cfg, key, value)
    for name in getattr(args, "disable", []):
        cfg.rankers[name] = False
    return cfg.validate()


def update_manifest(out: Path, command: str, cfg: PipelineConfig):
    path = out / "manifest.json"
    manifest = {"tool": "fitrank", "version": __version__, "steps": {}}
    if path.exists():
        manifest = json.loads(path.read_text(encoding="utf-8"))
    manifest["version"] = __version__
    manifest["steps"][command] = {"config_sha256": cfg.digest(), "config": cfg.to_dict()}
    manifest["steps"] = dict(sorted(manifest["steps"].items()))
    write_atomic(path, json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def cmd_extract(cfg, out):
    require(cfg, "corpus", "lexicon")
    docs = read_documents(cfg.corpus)
    lexicon = load_lexicon(cfg.lexicon)
    for doc in docs:
        cands = extract_candidates(doc, lexicon)
        path = out / "candidates" / f"{safe_name(doc.doc_id)}.jsonl"
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_name(path.name + ".tmp")
        write_candidates(cands, tmp)
        tmp.replace(path)
    log.info("extracted candidates for %d documents", len(docs))


def cmd_train_lda(cfg, out):
    require(cfg, "corpus")
    docs = read_documents(cfg.background or cfg.corpus)
    model = train_lda(Corpus(docs), cfg.K, cfg.lda_alpha, cfg.beta, cfg.lda_iterations, cfg.seed)
    out.mkdir(parents=True, exist_ok=True)
    tmp = out / "topic_model.json.tmp"
    model.save(tmp)
    tmp.replace(out / "topic_model.json")


def cmd_select_types(cfg, out):
    require(cfg, "lexicon")
    types = select_preferred_types(load_lexicon(cfg.lexicon))
    write_atomic(out / "preferred_types.txt", "\n".join(types) + "\n")


def cmd_rank(cfg, out):
    res = load_resources(cfg, cfg.method, out)
    (rankings,) = rank_corpus(cfg, cfg.method, res)
    for doc_id, ranking in rankings.items():
        write_atomic(out / "rankings" / cfg.method / f"{safe_name(doc_id)}.tsv", ranking_tsv(doc_id, ranking))


def _gold(cfg, known_ids):
    require(cfg, "gold")
    gold = load_gold(cfg.gold)
    unknown = [d for d in gold if d not in known_ids]
    if unknown:
        raise ConfigError(f"gold file names unknown documents: {', '.join(unknown)}")
    return gold


def cmd_eval(cfg, out, rankings_dir=None):
    if rankings_dir:
        require(cfg, "corpus")
        ids = [d.doc_id for d in read_documents(cfg.corpus)]
        gold = _gold(cfg, set(ids))
        rankings = {}
        for doc_id in ids:
            path = Path(rankings_dir, f"{safe_name(doc_id)}.tsv")
            if path.exists():
                rankings[doc_id] = read_ranking_tsv(path)
    else:
        res = load_resources(cfg, cfg.method, out)
        gold = _gold(cfg, {d.doc_id for d in res.corpus})
        (rankings,) = rank_corpus(cfg, cfg.method, res)
    report = evaluate_corpus(rankings, gold, cfg.ns)
    write_atomic(out / "eval" / cfg.method / "report.json", report.to_json())
    write_atomic(out / "eval" / cfg.method / "report.txt", report.to_table(cfg.method))
    return report


def cmd_sweep_d(cfg, out):
    res = load_resources(cfg, "fit", out)
    gold = _gold(cfg, {d.doc_id for d in res.corpus})
    per_d = rank_corpus(cfg, "fit", res, d_values=cfg.d_values)
    rows, data = [], []
    for d, rankings in zip(cfg.d_values, per_d):
        report = evaluate_corpus(rankings, gold, cfg.ns)
        rows.append((f"{d:g}", report.macro))
        data.append({"d": d, **{k: report.macro[k] for k in report.metric_names}})
    names = report.metric_names
    write_atomic(out / "sweep_d.txt", format_table(names, rows, first="d"))
    write_atomic(out / "sweep_d.json", json.dumps(data, indent=2) + "\n")


COMMANDS = {
    "extract": cmd_extract,
    "train-lda": cmd_train_lda,
    "select-types": cmd_select_types,
    "rank": cmd_rank,
    "eval": cmd_eval,
    "sweep-d": cmd_sweep_d,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    out = Path(args.out)
    try:
        cfg = make_config(args)
        if args.command in ("rank", "eval") and not getattr(args, "rankings", None):
            check_inputs(cfg, cfg.method, out)
        elif args.command == "sweep-d":
            check_inputs(cfg, "fit", out)
            require(cfg, "gold")
        elif args.command == "eval":
            require(cfg, "gold")
    except ConfigError as exc:
        parser.exit(2, f"fitrank {args.command}: error: {exc}\n")
    try:
        if args.command == "eval":
            cmd_eval(cfg, out, args.rankings)
        else:
            COMMANDS[args.command](cfg, out)
        update_manifest(out, args.command, cfg)
    except ConfigError as exc:
        parser.exit(2, f"fitrank {args.command}: error: {exc}\n")
    except Exception as exc:  # noqa: BLE001
        log.debug("run failed", exc_info=True)
        print(f"fitrank {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
