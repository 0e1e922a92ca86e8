"""Score ranked term lists against gold annotations.

A predicted term counts as correct when it equals a gold term or contains it
as a contiguous token run ("non-hodgkin lymphoma" finds "lymphoma"). The
reverse direction does not count.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from scipy.stats import rankdata

from .corpus import normalize

log = logging.getLogger(__name__)

DEFAULT_NS = (5, 10)


def _tokens(term) -> tuple[str, ...]:
    return normalize(term) if isinstance(term, str) else tuple(term)


def relaxed_match(predicted, gold) -> bool:
    p, g = _tokens(predicted), _tokens(gold)
    if not p or not g:
        raise ValueError("terms must be non-empty")
    n = len(g)
    return any(p[i:i + n] == g for i in range(len(p) - n + 1))


def load_gold(path) -> dict[str, list[tuple[str, ...]]]:
    """Read JSONL gold annotations ``{"doc_id", "gold_terms"}``."""
    gold = {}
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            if not line.strip():
                continue
            rec = json.loads(line)
            terms = [normalize(t) for t in rec["gold_terms"]]
            if not terms or not all(terms):
                raise ValueError(f"{path}:{lineno}: gold terms must be non-empty")
            gold[str(rec["doc_id"])] = terms
    return gold


def prf_at_n(ranked: Sequence, gold: Sequence, n: int) -> tuple[float, float, float]:
    """Precision, recall and F at cut-off ``n``.

    Each gold term is credited at most once, to the first prediction that
    matches it. Precision always divides by ``n``.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    gold = [_tokens(g) for g in gold]
    if not gold:
        raise ValueError("empty gold set: recall is undefined")
    credited = [False] * len(gold)
    tp = 0
    for pred in list(ranked)[:n]:
        pred = _tokens(pred)
        for gi, g in enumerate(gold):
            if not credited[gi] and relaxed_match(pred, g):
                credited[gi] = True
                tp += 1
                break
    precision, recall = tp / n, tp / len(gold)
    f = 0.0 if precision + recall == 0 else 2 * precision * recall / (precision + recall)
    return precision, recall, f


def pairwise_wins(pos, neg) -> float:
    """Count of (positive, negative) pairs with the positive scored higher,
    ties counting one half, via the rank-sum identity."""
    pos, neg = np.asarray(pos, dtype=float), np.asarray(neg, dtype=float)
    if pos.size == 0 or neg.size == 0:
        return 0.0
    ranks = rankdata(np.concatenate([pos, neg]), method="average")
    return float(ranks[:pos.size].sum() - pos.size * (pos.size + 1) / 2)


def _split(scored, gold):
    gold = [_tokens(g) for g in gold]
    pos, neg = [], []
    for term, score in scored:
        (pos if any(relaxed_match(term, g) for g in gold) else neg).append(score)
    return pos, neg


def auc_ranking(scored: Sequence[tuple], gold: Sequence) -> float:
    """AUC over the extracted candidates; NaN when positives or negatives are missing."""
    pos, neg = _split(scored, gold)
    if not pos or not neg:
        return math.nan
    return pairwise_wins(pos, neg) / (len(pos) * len(neg))


def auc_ke(scored: Sequence[tuple], gold: Sequence) -> float:
    """AUC with gold terms as the positives.

    A gold term takes the best score among candidates matching it; a gold
    term no candidate matches loses every comparison.
    """
    gold = [_tokens(g) for g in gold]
    scored = [(_tokens(t), s) for t, s in scored]
    neg = [s for t, s in scored if not any(relaxed_match(t, g) for g in gold)]
    if not gold or not neg:
        return math.nan
    found = []
    for g in gold:
        hits = [s for t, s in scored if relaxed_match(t, g)]
        if hits:
            found.append(max(hits))
    return pairwise_wins(found, neg) / (len(gold) * len(neg))


def _metric_names(ns):
    names = []
    for n in ns:
        names += [f"P{n}", f"R{n}", f"F{n}"]
    return names + ["auc_ranking", "auc_ke"]


def evaluate_document(scored: Sequence[tuple], gold: Sequence, ns=DEFAULT_NS) -> dict:
    """Metrics for one document; ``scored`` is the full ranked ``(term, score)`` list."""
    scored = [(_tokens(t), float(s)) for t, s in scored]
    gold = [_tokens(g) for g in gold]
    row = {}
    terms = [t for t, _ in scored]
    for n in ns:
        row[f"P{n}"], row[f"R{n}"], row[f"F{n}"] = prf_at_n(terms, gold, n)
    row["auc_ranking"] = auc_ranking(scored, gold)
    row["auc_ke"] = auc_ke(scored, gold)
    row["n_candidates"] = len(scored)
    row["n_gold"] = len(gold)
    row["n_gold_matched"] = sum(1 for g in gold if any(relaxed_match(t, g) for t in terms))
    return row


@dataclass
class EvalReport:
    ns: tuple[int, ...]
    per_document: dict[str, dict] = field(default_factory=dict)
    macro: dict[str, float] = field(default_factory=dict)

    @property
    def metric_names(self) -> list[str]:
        return _metric_names(self.ns)

    def to_json(self) -> str:
        def clean(v):
            return None if isinstance(v, float) and math.isnan(v) else v
        data = {
            "ns": list(self.ns),
            "macro": {k: clean(v) for k, v in self.macro.items()},
            "per_document": [{"doc_id": d, **{k: clean(v) for k, v in row.items()}}
                             for d, row in self.per_document.items()],
        }
        return json.dumps(data, indent=2) + "\n"

    def to_table(self, label: str = "system") -> str:
        return format_table(self.metric_names, [(label, self.macro)])


def format_table(metrics: Sequence[str], rows: Sequence[tuple[str, Mapping]], first: str = "System") -> str:
    """Aligned text table, one labelled row per system, three decimals per metric."""
    header = [first] + list(metrics)
    body = [[label] + [_fmt(values.get(m)) for m in metrics] for label, values in rows]
    widths = [max(len(r[c]) for r in [header] + body) for c in range(len(header))]
    lines = []
    for r in [header] + body:
        lines.append("  ".join(cell.ljust(w) if c == 0 else cell.rjust(w)
                               for c, (cell, w) in enumerate(zip(r, widths))).rstrip())
    return "\n".join(lines) + "\n"


def _fmt(v):
    if v is None or (isinstance(v, float) and math.isnan(v)):
        return "n/a"
    return f"{v:.3f}"


def evaluate_corpus(rankings: Mapping[str, object], golds: Mapping[str, Sequence], ns=DEFAULT_NS) -> EvalReport:
    """Per-document metrics and unweighted macro averages.

    ``rankings`` maps doc_id to a :class:`~fitrank.fusion.FusedRanking` or a
    list of ``(term, score)``. Documents whose AUC is undefined are left out
    of that AUC's average.
    """
    ns = tuple(ns)
    missing = [d for d in golds if d not in rankings]
    if missing:
        raise KeyError(f"no ranking for annotated documents: {', '.join(missing)}")
    report = EvalReport(ns)
    for doc_id, gold in golds.items():
        ranking = rankings[doc_id]
        entries = getattr(ranking, "entries", ranking)
        report.per_document[doc_id] = evaluate_document(entries, gold, ns)
    for name in report.metric_names:
        vals = [row[name] for row in report.per_document.values()]
        defined = [v for v in vals if not math.isnan(v)]
        if len(defined) < len(vals):
            skipped = [d for d, row in report.per_document.items() if math.isnan(row[name])]
            log.warning("%s undefined for %s; left out of the average", name, ", ".join(skipped))
        report.macro[name] = math.fsum(defined) / len(defined) if defined else math.nan
    return report
