"""
How the mixing weight d moves FIT
=================================

At d = 0 the walk only jumps, so FIT orders terms exactly like CombSum.
As d grows the preference graph takes over. This script evaluates the
grid 0.0, 0.1, ..., 1.0 on the toy notes.
"""

import tempfile
from pathlib import Path

import fitrank
from fitrank.evaluation import evaluate_corpus, format_table, load_gold
from fitrank.pipeline import D_GRID, PipelineConfig, load_resources, rank_corpus

TOY = Path(fitrank.__file__).parent / "data" / "toy"
cfg = PipelineConfig.load(TOY / "config.json").validate()
gold = load_gold(cfg.gold)

tmp = tempfile.mkdtemp()
fitrank.train_lda(fitrank.load_corpus(cfg.corpus), cfg.K, cfg.lda_alpha, cfg.beta,
                  cfg.lda_iterations, cfg.seed).save(Path(tmp, "topic_model.json"))
cfg.topic_model = str(Path(tmp, "topic_model.json"))
res = load_resources(cfg, "fit")

rows = []
for d, rankings in zip(D_GRID, rank_corpus(cfg, "fit", res, d_values=D_GRID)):
    report = evaluate_corpus(rankings, gold, cfg.ns)
    rows.append((f"{d:g}", report.macro))
print(format_table(report.metric_names, rows, first="d"))

# d = 0 against CombSum, document by document
(fit0,) = rank_corpus(cfg, "fit", res, d_values=[0.0])
(combsum,) = rank_corpus(cfg, "combsum", res)
print("same order as CombSum at d=0:", all(fit0[k].terms == combsum[k].terms for k in fit0))
