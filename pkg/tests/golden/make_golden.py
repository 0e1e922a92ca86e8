"""Regenerate the golden files for the bundled toy dataset.

Uses only the brute-force oracles in ``tests/oracles.py`` and plain file
parsing, never the package itself. Run from the repository root:

    python tests/golden/make_golden.py
"""

import json
import sys
from pathlib import Path

HERE = Path(__file__).resolve().parent
sys.path.insert(0, str(HERE.parent))

from oracles import (brute_auc, brute_auc_ke, brute_prf, contains, longest_match,  # noqa: E402
                     naive_tfidf, words)

TOY = HERE.parent.parent / "src" / "fitrank" / "data" / "toy"


def read_toy():
    docs = [json.loads(line) for line in (TOY / "corpus.jsonl").read_text().splitlines() if line.strip()]
    terms = []
    for line in (TOY / "lexicon.tsv").read_text().splitlines():
        if line and not line.startswith("#"):
            terms.append(tuple(words(line.split("\t")[0])))
    gold = {}
    for line in (TOY / "gold.jsonl").read_text().splitlines():
        rec = json.loads(line)
        gold[rec["doc_id"]] = [tuple(words(t)) for t in rec["gold_terms"]]
    scores = {}
    for line in (TOY / "scores.tsv").read_text().splitlines():
        if line and not line.startswith("#"):
            doc_id, term, value = line.split("\t")
            scores[(doc_id, tuple(words(term)))] = float(value)
    return docs, terms, gold, scores


def candidates(tokens, terms):
    """Distinct matched terms in first-occurrence order with their spans."""
    spans = {}
    for term, span in longest_match(tokens, terms):
        spans.setdefault(term, []).append(span)
    return list(spans.items())


def ordered(cands, score):
    idx = sorted(range(len(cands)), key=lambda i: (-score[i], i))
    return [(cands[i][0], score[i]) for i in idx]


def main():
    docs, terms, gold, ext = read_toy()
    corpus_tokens = [words(d["text"]) for d in docs]
    (HERE / "extract").mkdir(exist_ok=True)
    (HERE / "tfidf").mkdir(exist_ok=True)
    metrics = {"ns": [5, 10], "per_document": {}, "macro": {}}
    for doc, tokens in zip(docs, corpus_tokens):
        cands = candidates(tokens, terms)
        with open(HERE / "extract" / f"{doc['doc_id']}.jsonl", "w") as f:
            for term, spans in cands:
                f.write(json.dumps({"term": " ".join(term), "spans": [list(s) for s in spans]}) + "\n")

        tfidf = [naive_tfidf(len(spans), term, corpus_tokens) for term, spans in cands]
        lines = ["doc_id\trank\tterm\tscore\tmethod"]
        for pos, (term, s) in enumerate(ordered(cands, tfidf), 1):
            lines.append(f"{doc['doc_id']}\t{pos}\t{' '.join(term)}\t{s:.6g}\ttfidf")
        (HERE / "tfidf" / f"{doc['doc_id']}.tsv").write_text("\n".join(lines) + "\n")

        ranked = ordered(cands, [ext[(doc["doc_id"], term)] for term, _ in cands])
        g = gold[doc["doc_id"]]
        row = {}
        for n in (5, 10):
            row[f"P{n}"], row[f"R{n}"], row[f"F{n}"] = brute_prf([t for t, _ in ranked], g, n)
        pos = [s for t, s in ranked if any(contains(t, x) for x in g)]
        neg = [s for t, s in ranked if not any(contains(t, x) for x in g)]
        row["auc_ranking"] = brute_auc(pos, neg)
        row["auc_ke"] = brute_auc_ke(ranked, g)
        metrics["per_document"][doc["doc_id"]] = row
    for name in next(iter(metrics["per_document"].values())):
        vals = [row[name] for row in metrics["per_document"].values()]
        metrics["macro"][name] = sum(vals) / len(vals)
    (HERE / "toy_external_metrics.json").write_text(json.dumps(metrics, indent=2) + "\n")


if __name__ == "__main__":
    main()
