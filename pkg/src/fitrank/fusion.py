"""Fuse single-view rankings into one ranking per document.

``fit_rank`` runs a biased random walk over a term preference graph: an
edge leads from ``t_j`` to ``t_i`` when, among the rankers that rank both,
more prefer ``t_i`` (net count ``R``) and the weight
``R * sum_r (1/r(t_i) - 1/r(t_j))`` is positive. Random jumps follow the
summed zero-one normalized scores of the scored rankers; the mixing weight
``d`` trades jumps (``d = 0``, identical to CombSum) against graph moves.

Final orders break score ties by the summed normalized score and then by
the term's first position in the document.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .corpus import CandidateTerm
from .rankers import SCORED_TOTAL, RankerOutput
from .walk import WalkGraph, stationary_scores

DEFAULT_D = 0.5
DEFAULT_RRF_K = 60.0
METHODS = ("fit", "combsum", "condorcet", "rrf")


class NoScoredRankerError(ValueError):
    pass


def rank_relation(t_i: str, t_j: str, rankers: Sequence[RankerOutput]) -> int:
    """``R(t_j -> t_i)``: rankers preferring ``t_i`` minus rankers preferring ``t_j``."""
    net = 0
    for r in rankers:
        if t_i in r.ranks and t_j in r.ranks:
            if r.ranks[t_i] < r.ranks[t_j]:
                net += 1
            elif r.ranks[t_j] < r.ranks[t_i]:
                net -= 1
    return net


def edge_weight(t_i: str, t_j: str, rankers: Sequence[RankerOutput]) -> float:
    """``omega_{j,i}`` for the candidate edge ``t_j -> t_i``."""
    margin = 0.0
    for r in rankers:
        if t_i in r.ranks and t_j in r.ranks:
            margin += 1.0 / r.ranks[t_i] - 1.0 / r.ranks[t_j]
    return rank_relation(t_i, t_j, rankers) * margin


def _term_ids(candidates) -> list[str]:
    return [c.term_id if isinstance(c, CandidateTerm) else str(c) for c in candidates]


def _rank_matrix(terms, rankers):
    """Ranks as a (rankers x terms) float array, NaN where a ranker is silent."""
    out = np.full((len(rankers), len(terms)), np.nan)
    for a, r in enumerate(rankers):
        for b, t in enumerate(terms):
            if t in r.ranks:
                out[a, b] = r.ranks[t]
    return out


def relation_matrices(terms: Sequence[str], rankers: Sequence[RankerOutput]):
    """Return ``(R, W)`` with ``R[j, i] = R(t_j -> t_i)`` and ``W[j, i] = omega_{j,i}``."""
    n = len(terms)
    R = np.zeros((n, n), dtype=np.int64)
    margin = np.zeros((n, n))
    for row in _rank_matrix(terms, rankers):
        known = ~np.isnan(row)
        both = known[:, None] & known[None, :]
        rj, ri = row[:, None], row[None, :]
        with np.errstate(invalid="ignore"):
            R += np.where(both, (ri < rj).astype(np.int64) - (rj < ri).astype(np.int64), 0)
            margin += np.where(both, 1.0 / ri - 1.0 / rj, 0.0)
    return R, R * margin


def normalized_scores(ranker: RankerOutput, terms: Sequence[str]) -> np.ndarray:
    """Zero-one normalization with 1 for the best score; a constant ranker maps to all ones."""
    s = np.array([ranker.scores[t] for t in terms], dtype=float)
    lo, hi = s.min(), s.max()
    if hi == lo:
        return np.ones_like(s)
    return (s - lo) / (hi - lo)


def combsum_scores(candidates, rankers: Sequence[RankerOutput]) -> np.ndarray:
    terms = _term_ids(candidates)
    scored = [r for r in rankers if r.kind == SCORED_TOTAL]
    if not scored:
        raise NoScoredRankerError(
            "no scored ranker to build jump probabilities from; pass uniform_jump=True to use 1/n")
    total = np.zeros(len(terms))
    for r in scored:
        total += normalized_scores(r, terms)
    return total


def jump_distribution(candidates, rankers: Sequence[RankerOutput], uniform_jump: bool = False) -> np.ndarray:
    terms = _term_ids(candidates)
    if uniform_jump:
        return np.full(len(terms), 1.0 / len(terms))
    mass = combsum_scores(terms, rankers)
    return mass / mass.sum()


@dataclass(frozen=True, eq=False)
class FusionGraph:
    terms: tuple[str, ...]
    edges: dict[tuple[str, str], float]
    jump: np.ndarray
    mass: np.ndarray

    def to_walk_graph(self) -> WalkGraph:
        index = {t: i for i, t in enumerate(self.terms)}
        out: list[list[tuple[int, float]]] = [[] for _ in self.terms]
        for (tj, ti), w in self.edges.items():
            out[index[tj]].append((index[ti], w))
        return WalkGraph(len(self.terms), out, self.jump)


def build_fusion_graph(candidates, rankers: Sequence[RankerOutput], uniform_jump: bool = False) -> FusionGraph:
    terms = _term_ids(candidates)
    if not terms:
        raise ValueError("no candidates")
    R, W = relation_matrices(terms, rankers)
    edges = {}
    for j, i in zip(*np.nonzero((R > 0) & (W > 0))):
        edges[(terms[j], terms[i])] = float(W[j, i])
    if uniform_jump:
        mass = np.ones(len(terms))
    else:
        mass = combsum_scores(terms, rankers)
    return FusionGraph(tuple(terms), edges, mass / mass.sum(), mass)


@dataclass(frozen=True)
class FusedRanking:
    method: str
    entries: tuple[tuple[str, float], ...]
    params: Mapping[str, float]

    @property
    def terms(self) -> list[str]:
        return [t for t, _ in self.entries]

    @property
    def scores(self) -> dict[str, float]:
        return dict(self.entries)


def _ordered(method, terms, scores, tiebreak, params) -> FusedRanking:
    order = sorted(range(len(terms)), key=lambda i: (-scores[i], -tiebreak[i], i))
    return FusedRanking(method, tuple((terms[i], float(scores[i])) for i in order), dict(params))


def _tiebreak(terms, rankers):
    try:
        return combsum_scores(terms, rankers)
    except NoScoredRankerError:
        return np.zeros(len(terms))


def fit_rank(candidates, rankers: Sequence[RankerOutput], d: float = DEFAULT_D, tol: float = 1e-9,
             max_iter: int = 1000, uniform_jump: bool = False) -> FusedRanking:
    if not 0.0 <= d <= 1.0:
        raise ValueError("d must lie in [0, 1]")
    graph = build_fusion_graph(candidates, rankers, uniform_jump)
    s = stationary_scores(graph.to_walk_graph(), d, tol, max_iter)
    return _ordered("fit", list(graph.terms), s, graph.mass, {"d": d})


def combsum_rank(candidates, rankers: Sequence[RankerOutput]) -> FusedRanking:
    terms = _term_ids(candidates)
    total = combsum_scores(terms, rankers)
    return _ordered("combsum", terms, total, total, {})


def condorcet_rank(candidates, rankers: Sequence[RankerOutput]) -> FusedRanking:
    """Quicksort by pairwise majority, first element as pivot.

    Pairs with no majority keep their input order. Scores in the result are
    ``n - position`` so that larger is better, as for the other methods.
    """
    terms = _term_ids(candidates)
    R, _ = relation_matrices(terms, rankers)
    order: list[int] = []
    stack = [list(range(len(terms)))]
    while stack:
        part = stack.pop()
        if len(part) <= 1:
            order.extend(part)
            continue
        pivot, rest = part[0], part[1:]
        before, after = [], []
        for x in rest:
            net = R[pivot, x]  # R(pivot -> x) > 0: x preferred
            if net > 0 or (net == 0 and x < pivot):
                before.append(x)
            else:
                after.append(x)
        stack.extend([after, [pivot], before])
    n = len(terms)
    return FusedRanking("condorcet", tuple((terms[i], float(n - pos)) for pos, i in enumerate(order)), {})


def rrf_rank(candidates, rankers: Sequence[RankerOutput], k: float = DEFAULT_RRF_K) -> FusedRanking:
    if k <= 0:
        raise ValueError("k must be positive")
    terms = _term_ids(candidates)
    total = np.zeros(len(terms))
    for r in rankers:
        for i, t in enumerate(terms):
            if t in r.ranks:
                total[i] += 1.0 / (k + r.ranks[t])
    return _ordered("rrf", terms, total, _tiebreak(terms, rankers), {"k": k})


def single_ranking(candidates, ranker: RankerOutput) -> FusedRanking:
    """Present one scored ranker's output as an ordered list."""
    terms = _term_ids(candidates)
    s = np.array([ranker.scores[t] for t in terms], dtype=float)
    return _ordered(ranker.ranker_id, terms, s, s, {})


def fuse(method: str, candidates, rankers, d: float = DEFAULT_D, rrf_k: float = DEFAULT_RRF_K,
         tol: float = 1e-9, max_iter: int = 1000) -> FusedRanking:
    if method == "fit":
        return fit_rank(candidates, rankers, d, tol, max_iter)
    if method == "combsum":
        return combsum_rank(candidates, rankers)
    if method == "condorcet":
        return condorcet_rank(candidates, rankers)
    if method == "rrf":
        return rrf_rank(candidates, rankers, rrf_k)
    raise ValueError(f"unknown fusion method {method!r}")
