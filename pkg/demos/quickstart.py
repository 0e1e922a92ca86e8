"""
Ranking the terms of one clinical note
======================================

Walks through the library on the bundled toy data: find candidate terms,
score them with each single view, then fuse the views.
"""

from pathlib import Path

import numpy as np

import fitrank
from fitrank.rankers import load_external_scores

TOY = Path(fitrank.__file__).parent / "data" / "toy"

corpus = fitrank.load_corpus(TOY / "corpus.jsonl")
lexicon = fitrank.load_lexicon(TOY / "lexicon.tsv")
doc = corpus["note-1"]
print(doc.text)

# candidate terms: greedy longest match against the lexicon
cands = fitrank.extract_candidates(doc, lexicon)
for c in cands:
    print(f"{c.term_id:30s} tf={c.tf} first at token {c.first_position}")

# a small topic model over the same notes
model = fitrank.train_lda(corpus, K=4, iterations=200, seed=7)

preferred = fitrank.select_preferred_types(lexicon)
print("preferred types:", preferred)

views = [
    fitrank.tfidf_rank(doc, cands, corpus),
    fitrank.singlerank_rank(doc, cands),
    fitrank.topic_coherence_rank(doc, cands, model, iterations=50),
    fitrank.external_score_rank(cands, load_external_scores(TOY / "scores.tsv", doc.doc_id)),
    fitrank.unfamiliarity_rank(cands),
    fitrank.semantic_type_rank(cands, preferred),
]
for v in views:
    best = sorted(v.ranks, key=v.ranks.get)[:3]
    print(f"{v.ranker_id:14s} ({v.kind}) top: {best}")

# the preference graph: edges point from less to more preferred terms
graph = fitrank.build_fusion_graph(cands, views)
print(len(graph.edges), "edges; jump mass of the top term:", np.round(graph.jump.max(), 3))

ranking = fitrank.fit_rank(cands, views, d=0.5)
for pos, (term, score) in enumerate(ranking.entries[:5], 1):
    print(pos, term, round(score, 4))
