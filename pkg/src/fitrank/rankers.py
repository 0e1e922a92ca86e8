"""Single-view rankers over one document's candidate terms.

Each ranker returns a :class:`RankerOutput`. Scored rankers (TF-IDF,
SingleRank, topic coherence, external scores) score every candidate; the
two categorical views (unfamiliarity, semantic type) only split candidates
into a preferred block and the rest, and the unfamiliarity view ranks just
the candidates whose lexicon entry carries a familiarity score.

Ranks use competition ranking: a term's rank is one plus the number of terms
strictly better than it.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .corpus import CandidateTerm, Corpus, Document, Lexicon, normalize
from .walk import WalkGraph, stationary_scores

SCORED_TOTAL = "scored_total"
ORDER_ONLY_TOTAL = "order_only_total"
ORDER_ONLY_PARTIAL = "order_only_partial"
KINDS = (SCORED_TOTAL, ORDER_ONLY_TOTAL, ORDER_ONLY_PARTIAL)

DEFAULT_WINDOW = 10
DEFAULT_DAMPING = 0.85
DEFAULT_FAMILIARITY_THRESHOLD = 0.6


class CoverageError(ValueError):
    """External scores do not cover every candidate term."""

    def __init__(self, missing):
        self.missing = list(missing)
        super().__init__("no external score for: " + ", ".join(self.missing))


def competition_ranks(scores: Mapping[str, float]) -> dict[str, int]:
    """Rank by descending score, tied scores sharing the best rank ("1,2,2,4")."""
    values = sorted(scores.values(), reverse=True)
    first = {}
    for pos, v in enumerate(values, 1):
        first.setdefault(v, pos)
    return {t: first[s] for t, s in scores.items()}


@dataclass(frozen=True)
class RankerOutput:
    ranker_id: str
    kind: str
    ranks: dict[str, int]
    scores: dict[str, float] | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown ranker kind {self.kind!r}")
        if (self.scores is not None) != (self.kind == SCORED_TOTAL):
            raise ValueError("scores are present iff the ranker is scored_total")
        if self.scores is not None and set(self.scores) != set(self.ranks):
            raise ValueError("scores and ranks must cover the same terms")

    @classmethod
    def from_scores(cls, ranker_id: str, scores: Mapping[str, float]) -> "RankerOutput":
        scores = {t: float(s) for t, s in scores.items()}
        return cls(ranker_id, SCORED_TOTAL, competition_ranks(scores), scores)

    @classmethod
    def from_blocks(cls, ranker_id, preferred: Iterable[str], others: Iterable[str],
                    kind=ORDER_ONLY_TOTAL) -> "RankerOutput":
        """Two-block order: every preferred term ahead of every other term."""
        preferred, others = list(preferred), list(others)
        ranks = {t: 1 for t in preferred}
        ranks.update({t: 1 + len(preferred) for t in others})
        return cls(ranker_id, kind, ranks)

    def covers(self, term_id) -> bool:
        return term_id in self.ranks


# --- TF-IDF ----------------------------------------------------------------

def tfidf_scores(doc: Document, candidates: Sequence[CandidateTerm], corpus: Corpus) -> dict[str, float]:
    n_docs = corpus.N
    inside = doc in corpus
    if not inside:
        n_docs += 1
    scores = {}
    for c in candidates:
        df = corpus.document_frequency(c.surface_tokens)
        if not inside:
            df += 1
        scores[c.term_id] = c.tf * math.log(n_docs / df)
    return scores


def tfidf_rank(doc: Document, candidates: Sequence[CandidateTerm], corpus: Corpus) -> RankerOutput:
    """``tf(t, doc) * ln(N / df(t))`` over the background corpus.

    A document outside the corpus is counted as one extra corpus member so
    that every candidate has a document frequency of at least one.
    """
    return RankerOutput.from_scores("tfidf", tfidf_scores(doc, candidates, corpus))


# --- SingleRank ------------------------------------------------------------

@dataclass(frozen=True)
class CooccurrenceGraph:
    vertices: tuple[str, ...]
    edge_weights: dict[tuple[str, str], int]
    window: int

    def weight(self, u, v) -> int:
        return self.edge_weights.get((u, v) if u <= v else (v, u), 0)

    def neighbors(self, u) -> dict[str, int]:
        out = {}
        for (a, b), w in self.edge_weights.items():
            if a == u:
                out[b] = w
            elif b == u:
                out[a] = w
        return out

    def to_walk_graph(self) -> WalkGraph:
        index = {v: i for i, v in enumerate(self.vertices)}
        adj: list[list[tuple[int, float]]] = [[] for _ in self.vertices]
        for (a, b), w in sorted(self.edge_weights.items()):
            adj[index[a]].append((index[b], w))
            adj[index[b]].append((index[a], w))
        return WalkGraph.uniform(len(self.vertices), adj)


def build_cooccurrence_graph(doc: Document, candidates: Sequence[CandidateTerm],
                             window: int = DEFAULT_WINDOW) -> CooccurrenceGraph:
    """Word graph over the words that make up the candidate terms.

    Two vertex words are linked once for every pair of positions at distance
    less than ``window``; pairs of the same word are skipped.
    """
    if window < 2:
        raise ValueError("window must be at least 2")
    vocab = set()
    for c in candidates:
        vocab.update(c.surface_tokens)
    positions = [(i, w) for i, w in enumerate(doc.tokens) if w in vocab]
    weights: Counter = Counter()
    for a in range(len(positions)):
        i, u = positions[a]
        for b in range(a + 1, len(positions)):
            j, v = positions[b]
            if j - i >= window:
                break
            if u != v:
                weights[(u, v) if u <= v else (v, u)] += 1
    order = []
    seen = set()
    for _, w in positions:
        if w not in seen:
            seen.add(w)
            order.append(w)
    return CooccurrenceGraph(tuple(order), dict(sorted(weights.items())), window)


def word_scores(graph: CooccurrenceGraph, damping: float = DEFAULT_DAMPING,
                tol: float = 1e-9, max_iter: int = 1000) -> dict[str, float]:
    if not 0.0 < damping < 1.0:
        raise ValueError("damping must lie strictly between 0 and 1")
    if not graph.edge_weights:
        return {v: 0.0 for v in graph.vertices}
    s = stationary_scores(graph.to_walk_graph(), damping, tol, max_iter)
    return dict(zip(graph.vertices, s.tolist()))


def singlerank_rank(doc: Document, candidates: Sequence[CandidateTerm], window: int = DEFAULT_WINDOW,
                    damping: float = DEFAULT_DAMPING, tol: float = 1e-9, max_iter: int = 1000) -> RankerOutput:
    """Term score = sum of its words' co-occurrence walk scores (repeats count)."""
    ws = word_scores(build_cooccurrence_graph(doc, candidates, window), damping, tol, max_iter)
    scores = {c.term_id: sum(ws.get(w, 0.0) for w in c.surface_tokens) for c in candidates}
    return RankerOutput.from_scores("singlerank", scores)


# --- topic coherence -------------------------------------------------------

def topic_coherence_rank(doc: Document, candidates: Sequence[CandidateTerm], model,
                         theta: np.ndarray | None = None, iterations: int = 100,
                         seed: int = 0) -> RankerOutput:
    """Score terms by ``sum_w P(w|doc)`` with ``P(w|doc) = sum_k phi[k,w] theta[k]``.

    ``theta`` defaults to the model's stored distribution for ``doc`` or, failing
    that, fold-in inference. Out-of-vocabulary words contribute nothing.
    """
    if theta is None:
        theta = model.doc_topics(doc, iterations=iterations, seed=seed).theta
    word_prob = np.asarray(theta) @ model.phi
    index = model.word_index
    scores = {}
    for c in candidates:
        scores[c.term_id] = float(sum(word_prob[index[w]] for w in c.surface_tokens if w in index))
    return RankerOutput.from_scores("topic", scores)


# --- external scores -------------------------------------------------------

def load_external_scores(path, doc_id: str | None = None) -> dict[tuple[str, ...], float]:
    """Read a ``term<TAB>score`` file, or ``doc_id<TAB>term<TAB>score`` rows
    filtered to ``doc_id``."""
    out = {}
    with open(path, encoding="utf-8") as f:
        for lineno, raw in enumerate(f, 1):
            line = raw.rstrip("\r\n")
            if not line.strip() or line.startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) == 3:
                if doc_id is None:
                    raise ValueError(f"{path}:{lineno}: 3-column score file needs a doc_id")
                if cols[0] != doc_id:
                    continue
                cols = cols[1:]
            elif len(cols) != 2:
                raise ValueError(f"{path}:{lineno}: expected 2 or 3 columns, got {len(cols)}")
            try:
                out[normalize(cols[0])] = float(cols[1])
            except ValueError:
                raise ValueError(f"{path}:{lineno}: bad score {cols[1]!r}") from None
    return out


def external_score_rank(candidates: Sequence[CandidateTerm], scores, doc_id: str | None = None,
                        ranker_id: str = "external") -> RankerOutput:
    """Rank by externally supplied per-term scores (a path or a mapping)."""
    if not isinstance(scores, Mapping):
        scores = load_external_scores(scores, doc_id)
    missing = [c.term_id for c in candidates if c.surface_tokens not in scores]
    if missing:
        raise CoverageError(missing)
    return RankerOutput.from_scores(ranker_id, {c.term_id: scores[c.surface_tokens] for c in candidates})


# --- categorical views -----------------------------------------------------

def unfamiliarity_rank(candidates: Sequence[CandidateTerm],
                       threshold: float = DEFAULT_FAMILIARITY_THRESHOLD) -> RankerOutput:
    """Unfamiliar terms (familiarity <= threshold) ahead of familiar ones.

    Terms without a familiarity score are left out of the ranking.
    """
    if not 0.0 <= threshold <= 1.0:
        raise ValueError("threshold must lie in [0, 1]")
    unfamiliar, familiar = [], []
    for c in candidates:
        fam = c.lexicon_ref.familiarity if c.lexicon_ref is not None else None
        if fam is None:
            continue
        (unfamiliar if fam <= threshold else familiar).append(c.term_id)
    return RankerOutput.from_blocks("unfamiliarity", unfamiliar, familiar, kind=ORDER_ONLY_PARTIAL)


def semantic_type_rank(candidates: Sequence[CandidateTerm], preferred_types) -> RankerOutput:
    preferred_types = set(preferred_types)
    if not preferred_types:
        raise ValueError("preferred_types is empty")
    pref, rest = [], []
    for c in candidates:
        ref = c.lexicon_ref
        hit = ref is not None and bool(ref.semantic_types & preferred_types)
        (pref if hit else rest).append(c.term_id)
    return RankerOutput.from_blocks("semantic_type", pref, rest)


def type_frequencies(lexicon: Lexicon | Iterable) -> list[tuple[str, int]]:
    """Semantic-type counts over vocabulary members, most frequent first
    (ties alphabetical)."""
    counts: Counter = Counter()
    for entry in lexicon:
        if entry.vocab_member:
            counts.update(entry.semantic_types)
    return sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))


def cutting_point(freqs: Sequence[int]) -> int:
    """Number of top-ranked types to keep, given descending frequencies.

    Candidate cuts keep more than half of the total mass; among those, the cut
    with the largest drop to the next rank wins (earliest on ties). Past the
    last rank the next frequency counts as zero.
    """
    if not freqs:
        raise ValueError("no frequencies")
    total = sum(freqs)
    best_k, best_gap = None, None
    running = 0
    for k, f in enumerate(freqs, 1):
        running += f
        if running * 2 <= total:
            continue
        nxt = freqs[k] if k < len(freqs) else 0
        gap = f - nxt
        if best_gap is None or gap > best_gap:
            best_k, best_gap = k, gap
    return best_k


def select_preferred_types(lexicon) -> list[str]:
    ranked = type_frequencies(lexicon)
    if not ranked:
        raise ValueError("lexicon has no typed vocabulary-member entries")
    k = cutting_point([f for _, f in ranked])
    return [t for t, _ in ranked[:k]]
