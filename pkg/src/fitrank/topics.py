"""LDA topic model trained by collapsed Gibbs sampling.

Topic-word estimates come from the final sample (no averaging over the
chain). Random numbers are drawn from a numpy ``Generator`` seeded once per
call, so a fixed seed gives bit-identical results.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from numba import njit

from .corpus import Corpus, Document

FORMAT = "fitrank-topic-model/1"

STOPWORDS = frozenset("""
a about above after again against all am an and any are as at be because been
before being below between both but by can could did do does doing down during
each few for from further had has have having he her here hers herself him
himself his how i if in into is it its itself just me more most my myself no
nor not now of off on once only or other our ours ourselves out over own same
she should so some such than that the their theirs them themselves then there
these they this those through to too under until up very was we were what when
where which while who whom why will with would you your yours yourself
yourselves
""".split())


@njit(cache=True)
def _gibbs_sweep(words, docs, z, n_dk, n_kw, n_k, alpha, beta, vbeta, u):
    K = n_k.shape[0]
    p = np.empty(K)
    for t in range(words.shape[0]):
        w = words[t]
        d = docs[t]
        k = z[t]
        n_dk[d, k] -= 1
        n_kw[k, w] -= 1
        n_k[k] -= 1
        total = 0.0
        for j in range(K):
            total += (n_dk[d, j] + alpha) * (n_kw[j, w] + beta) / (n_k[j] + vbeta)
            p[j] = total
        target = u[t] * total
        k = K - 1
        for j in range(K):
            if target < p[j]:
                k = j
                break
        z[t] = k
        n_dk[d, k] += 1
        n_kw[k, w] += 1
        n_k[k] += 1


@njit(cache=True)
def _fold_in_sweep(words, z, m_k, phi, alpha, u):
    K = m_k.shape[0]
    p = np.empty(K)
    for t in range(words.shape[0]):
        w = words[t]
        m_k[z[t]] -= 1
        total = 0.0
        for j in range(K):
            total += (m_k[j] + alpha) * phi[j, w]
            p[j] = total
        target = u[t] * total
        k = K - 1
        for j in range(K):
            if target < p[j]:
                k = j
                break
        z[t] = k
        m_k[k] += 1


@dataclass(frozen=True)
class DocTopicDistribution:
    doc_id: str
    theta: np.ndarray


@dataclass(frozen=True, eq=False)
class TopicModel:
    K: int
    vocabulary: tuple[str, ...]
    phi: np.ndarray
    alpha: float
    beta: float
    seed: int = 0
    theta: Mapping[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        if self.K < 1 or not self.vocabulary:
            raise ValueError("a topic model needs K >= 1 and a non-empty vocabulary")
        if self.alpha <= 0 or self.beta <= 0:
            raise ValueError("alpha and beta must be positive")
        phi = np.asarray(self.phi, dtype=float)
        if phi.shape != (self.K, len(self.vocabulary)):
            raise ValueError(f"phi has shape {phi.shape}, expected ({self.K}, {len(self.vocabulary)})")
        if np.any(phi < 0) or np.any(np.abs(phi.sum(axis=1) - 1.0) > 1e-9):
            raise ValueError("phi rows must be probability distributions")
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "word_index", {w: i for i, w in enumerate(self.vocabulary)})
        object.__setattr__(self, "theta", {k: _check_theta(v, self.K) for k, v in self.theta.items()})

    @property
    def V(self) -> int:
        return len(self.vocabulary)

    def doc_topics(self, doc: Document, iterations: int = 100, seed: int | None = None) -> DocTopicDistribution:
        """Stored theta for ``doc`` if the model carries one, else fold-in inference."""
        if doc.doc_id in self.theta:
            return DocTopicDistribution(doc.doc_id, self.theta[doc.doc_id])
        return infer_doc_topics(self, doc, iterations, self.seed if seed is None else seed)

    def to_dict(self) -> dict:
        out = {
            "format": FORMAT,
            "K": self.K,
            "alpha": self.alpha,
            "beta": self.beta,
            "seed": self.seed,
            "vocabulary": list(self.vocabulary),
            "phi": self.phi.tolist(),
        }
        if self.theta:
            out["theta"] = {k: v.tolist() for k, v in sorted(self.theta.items())}
        return out

    @classmethod
    def from_dict(cls, data: Mapping) -> "TopicModel":
        return cls(
            K=int(data["K"]),
            vocabulary=tuple(data["vocabulary"]),
            phi=np.asarray(data["phi"], dtype=float),
            alpha=float(data["alpha"]),
            beta=float(data["beta"]),
            seed=int(data.get("seed", 0)),
            theta={k: np.asarray(v, dtype=float) for k, v in data.get("theta", {}).items()},
        )

    def save(self, path):
        with open(path, "w", encoding="utf-8") as f:
            json.dump(self.to_dict(), f)
            f.write("\n")

    @classmethod
    def load(cls, path) -> "TopicModel":
        with open(path, encoding="utf-8") as f:
            return cls.from_dict(json.load(f))


def _check_theta(theta, K):
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (K,) or np.any(theta < 0) or abs(theta.sum() - 1.0) > 1e-9:
        raise ValueError("theta must be a length-K probability vector")
    return theta


def topic_tokens(doc: Document, stopwords=STOPWORDS) -> list[str]:
    return [w for w in doc.tokens if w not in stopwords]


def train_lda(corpus: Corpus | Sequence[Document], K: int, alpha: float | None = None, beta: float = 0.01,
              iterations: int = 1000, seed: int = 0, stopwords=STOPWORDS) -> TopicModel:
    """Fit LDA with ``iterations`` collapsed Gibbs sweeps.

    ``alpha`` defaults to ``50 / K``. Stopwords are dropped before training.
    """
    if K < 1:
        raise ValueError("K must be at least 1")
    if iterations < 1:
        raise ValueError("iterations must be at least 1")
    if alpha is None:
        alpha = 50.0 / K
    if alpha <= 0 or beta <= 0:
        raise ValueError("alpha and beta must be positive")
    texts = [topic_tokens(doc, stopwords) for doc in corpus]
    vocabulary = tuple(sorted({w for text in texts for w in text}))
    if not vocabulary:
        raise ValueError("corpus has no words left after stopword removal")
    index = {w: i for i, w in enumerate(vocabulary)}
    V = len(vocabulary)

    words = np.array([index[w] for text in texts for w in text], dtype=np.int64)
    docs = np.array([d for d, text in enumerate(texts) for _ in text], dtype=np.int64)
    rng = np.random.default_rng(seed)
    z = rng.integers(0, K, size=words.shape[0]).astype(np.int64)

    n_dk = np.zeros((len(texts), K), dtype=np.int64)
    n_kw = np.zeros((K, V), dtype=np.int64)
    np.add.at(n_dk, (docs, z), 1)
    np.add.at(n_kw, (z, words), 1)
    n_k = n_kw.sum(axis=1)

    for _ in range(iterations):
        u = rng.random(words.shape[0])
        _gibbs_sweep(words, docs, z, n_dk, n_kw, n_k, float(alpha), float(beta), V * float(beta), u)

    phi = (n_kw + beta) / (n_k[:, None] + V * beta)
    return TopicModel(K, vocabulary, phi, float(alpha), float(beta), seed)


def infer_doc_topics(model: TopicModel, doc: Document, iterations: int = 100, seed: int = 0) -> DocTopicDistribution:
    """Fold-in Gibbs sampling of ``doc``'s topic mixture with ``phi`` held fixed.

    A document with no in-vocabulary words gets the uniform mixture.
    """
    K = model.K
    index = model.word_index
    words = np.array([index[w] for w in doc.tokens if w in index], dtype=np.int64)
    if words.size == 0:
        return DocTopicDistribution(doc.doc_id, np.full(K, 1.0 / K))
    rng = np.random.default_rng(seed)
    z = rng.integers(0, K, size=words.shape[0]).astype(np.int64)
    m_k = np.bincount(z, minlength=K).astype(np.int64)
    for _ in range(iterations):
        _fold_in_sweep(words, z, m_k, model.phi, model.alpha, rng.random(words.shape[0]))
    theta = (m_k + model.alpha) / (words.shape[0] + K * model.alpha)
    return DocTopicDistribution(doc.doc_id, theta)
