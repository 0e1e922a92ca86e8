"""
Fusion methods side by side
===========================

Evaluates every single view and every fusion method on the toy notes and
prints one table row per system.
"""

import tempfile
from pathlib import Path

import fitrank
from fitrank.evaluation import evaluate_corpus, format_table, load_gold
from fitrank.pipeline import PipelineConfig, load_resources, rank_corpus

TOY = Path(fitrank.__file__).parent / "data" / "toy"
cfg = PipelineConfig.load(TOY / "config.json").validate()
gold = load_gold(cfg.gold)

# the topic view needs a trained model on disk
tmp = tempfile.mkdtemp()
model = fitrank.train_lda(fitrank.load_corpus(cfg.corpus), cfg.K, cfg.lda_alpha, cfg.beta,
                          cfg.lda_iterations, cfg.seed)
model.save(Path(tmp, "topic_model.json"))
cfg.topic_model = str(Path(tmp, "topic_model.json"))

rows = []
for method in ("tfidf", "singlerank", "topic", "external", "combsum", "condorcet", "rrf", "fit"):
    (rankings,) = rank_corpus(cfg, method, load_resources(cfg, method))
    report = evaluate_corpus(rankings, gold, cfg.ns)
    rows.append((method, report.macro))

print(format_table(report.metric_names, rows))
