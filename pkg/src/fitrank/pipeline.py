"""Pipeline configuration and per-document orchestration.

Everything the command line does is available here as plain functions, so
a script can run the same steps without going through argument parsing.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import os
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

import numpy as np

from .corpus import (CandidateTerm, Corpus, Document, Lexicon, extract_candidates,
                     import_candidates, load_corpus, load_lexicon)
from .fusion import METHODS as FUSION_METHODS
from .fusion import FusedRanking, fuse, single_ranking
from .rankers import (RankerOutput, external_score_rank, load_external_scores, select_preferred_types,
                      semantic_type_rank, singlerank_rank, tfidf_rank, topic_coherence_rank,
                      unfamiliarity_rank)
from .topics import TopicModel

RANKERS = ("tfidf", "singlerank", "topic", "external", "unfamiliarity", "semantic_type")
SINGLE_METHODS = ("tfidf", "singlerank", "topic", "external")
METHODS = FUSION_METHODS + SINGLE_METHODS
PATH_KEYS = ("corpus", "background", "lexicon", "gold", "external_scores", "topic_model", "candidates")
D_GRID = tuple(round(0.1 * i, 1) for i in range(11))


class ConfigError(ValueError):
    """Invalid or incomplete configuration (reported as a usage error)."""


@dataclass
class PipelineConfig:
    corpus: str | None = None
    background: str | None = None
    lexicon: str | None = None
    gold: str | None = None
    external_scores: str | None = None
    topic_model: str | None = None
    candidates: str | None = None
    preferred_types: list[str] | str | None = None
    window: int = 10
    damping: float = 0.85
    d: float = 0.5
    rrf_k: float = 60.0
    familiarity_threshold: float = 0.6
    K: int = 200
    lda_iterations: int = 1000
    infer_iterations: int = 100
    alpha: float | None = None
    beta: float = 0.01
    seed: int = 0
    tol: float = 1e-9
    max_iter: int = 1000
    rankers: dict[str, bool] = field(default_factory=lambda: {r: True for r in RANKERS})
    method: str = "fit"
    ns: list[int] = field(default_factory=lambda: [5, 10])
    d_values: list[float] = field(default_factory=lambda: list(D_GRID))
    jobs: int = 1

    @classmethod
    def from_dict(cls, data: Mapping, base_dir=None) -> "PipelineConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        data = dict(data)
        if base_dir is not None:
            for key in PATH_KEYS:
                if data.get(key):
                    data[key] = str(Path(base_dir, data[key]))
            if isinstance(data.get("preferred_types"), str):
                data["preferred_types"] = str(Path(base_dir, data["preferred_types"]))
        if "rankers" in data:
            bad = sorted(set(data["rankers"]) - set(RANKERS))
            if bad:
                raise ConfigError(f"unknown rankers: {', '.join(bad)}")
            data["rankers"] = {**{r: True for r in RANKERS}, **data["rankers"]}
        return cls(**data)

    @classmethod
    def load(cls, path) -> "PipelineConfig":
        with open(path, encoding="utf-8") as f:
            try:
                data = json.load(f)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"{path}: {exc}") from exc
        return cls.from_dict(data, base_dir=Path(path).parent)

    def validate(self):
        checks = [
            (self.window >= 2, "window must be at least 2"),
            (0 < self.damping < 1, "damping must lie in (0, 1)"),
            (0 <= self.d <= 1, "d must lie in [0, 1]"),
            (self.rrf_k > 0, "rrf_k must be positive"),
            (0 <= self.familiarity_threshold <= 1, "familiarity_threshold must lie in [0, 1]"),
            (self.K >= 1, "K must be at least 1"),
            (self.lda_iterations >= 1, "lda_iterations must be at least 1"),
            (self.infer_iterations >= 1, "infer_iterations must be at least 1"),
            (self.alpha is None or self.alpha > 0, "alpha must be positive"),
            (self.beta > 0, "beta must be positive"),
            (self.tol > 0, "tol must be positive"),
            (self.max_iter >= 1, "max_iter must be at least 1"),
            (self.method in METHODS, f"method must be one of {', '.join(METHODS)}"),
            (len(self.ns) > 0 and all(int(n) == n and n >= 1 for n in self.ns), "ns must be positive integers"),
            (len(self.d_values) > 0, "d_values must not be empty"),
            (all(0 <= d <= 1 for d in self.d_values), "every d value must lie in [0, 1]"),
            (self.jobs >= 1, "jobs must be at least 1"),
        ]
        for ok, message in checks:
            if not ok:
                raise ConfigError(message)
        for key in PATH_KEYS:
            path = getattr(self, key)
            if path and not os.path.exists(path):
                raise ConfigError(f"{key}: no such file or directory: {path}")
        return self

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def digest(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()

    @property
    def lda_alpha(self) -> float:
        return 50.0 / self.K if self.alpha is None else self.alpha


def doc_seed(root: int, doc_id: str) -> int:
    """Per-document seed derived from the root seed."""
    return int(np.random.SeedSequence([root, zlib.crc32(doc_id.encode())]).generate_state(1)[0])


def safe_name(doc_id: str) -> str:
    return "".join(ch if ch.isalnum() or ch in "._-" else "_" for ch in doc_id) or "_"


@dataclass
class Resources:
    """Loaded inputs for a ranking run."""

    corpus: Corpus
    background: Corpus
    lexicon: Lexicon | None
    candidates: dict[str, list[CandidateTerm]]
    topic_model: TopicModel | None = None
    external_scores: str | None = None
    preferred_types: list[str] | None = None


def require(cfg: PipelineConfig, *keys):
    for key in keys:
        if not getattr(cfg, key):
            raise ConfigError(f"missing required input: {key}")


def needed_rankers(cfg: PipelineConfig, method: str) -> list[str]:
    if method in SINGLE_METHODS:
        return [method]
    return [r for r in RANKERS if cfg.rankers.get(r, True)]


def find_candidates(cfg: PipelineConfig, out_dir=None) -> Path | None:
    if cfg.candidates:
        return Path(cfg.candidates)
    if out_dir is not None and Path(out_dir, "candidates").is_dir():
        return Path(out_dir, "candidates")
    return None


def find_topic_model(cfg: PipelineConfig, out_dir=None) -> Path | None:
    if cfg.topic_model:
        return Path(cfg.topic_model)
    if out_dir is not None and Path(out_dir, "topic_model.json").is_file():
        return Path(out_dir, "topic_model.json")
    return None


def read_preferred_types(path) -> list[str]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    return [ln.strip() for ln in lines if ln.strip() and not ln.startswith("#")]


def check_inputs(cfg: PipelineConfig, method: str, out_dir=None):
    """Fail early, naming the first input the run cannot do without."""
    require(cfg, "corpus")
    wanted = needed_rankers(cfg, method)
    if not wanted:
        raise ConfigError("every ranker is disabled")
    if find_candidates(cfg, out_dir) is None and not cfg.lexicon:
        raise ConfigError("missing required input: lexicon (or candidates) to find candidate terms")
    if "topic" in wanted and find_topic_model(cfg, out_dir) is None:
        raise ConfigError("ranker 'topic' needs a topic model: set topic_model or run train-lda first")
    if "external" in wanted and not cfg.external_scores:
        raise ConfigError("ranker 'external' needs external_scores")
    if {"unfamiliarity", "semantic_type"} & set(wanted) and not cfg.lexicon:
        raise ConfigError("rankers 'unfamiliarity' and 'semantic_type' need a lexicon")
    if method in ("fit", "combsum") and not set(wanted) & set(SINGLE_METHODS):
        raise ConfigError(f"method {method!r} needs at least one scored ranker")


def load_resources(cfg: PipelineConfig, method: str, out_dir=None) -> Resources:
    check_inputs(cfg, method, out_dir)
    corpus = load_corpus(cfg.corpus)
    background = load_corpus(cfg.background) if cfg.background else corpus
    lexicon = load_lexicon(cfg.lexicon) if cfg.lexicon else None
    cand_dir = find_candidates(cfg, out_dir)
    candidates = {}
    for doc in corpus:
        if cand_dir is not None:
            path = cand_dir / f"{safe_name(doc.doc_id)}.jsonl"
            candidates[doc.doc_id] = import_candidates(doc, path, lexicon) if path.exists() else []
        else:
            candidates[doc.doc_id] = extract_candidates(doc, lexicon)
    wanted = needed_rankers(cfg, method)
    res = Resources(corpus, background, lexicon, candidates)
    if "topic" in wanted:
        res.topic_model = TopicModel.load(find_topic_model(cfg, out_dir))
    if "external" in wanted:
        res.external_scores = cfg.external_scores
    if "semantic_type" in wanted:
        pref = cfg.preferred_types
        if pref is None and out_dir is not None and Path(out_dir, "preferred_types.txt").is_file():
            pref = str(Path(out_dir, "preferred_types.txt"))
        if isinstance(pref, str):
            pref = read_preferred_types(pref)
        res.preferred_types = list(pref) if pref else select_preferred_types(lexicon)
    return res


def document_rankers(doc: Document, cands, res: Resources, cfg: PipelineConfig, wanted) -> list[RankerOutput]:
    out = []
    for name in wanted:
        if name == "tfidf":
            out.append(tfidf_rank(doc, cands, res.background))
        elif name == "singlerank":
            out.append(singlerank_rank(doc, cands, cfg.window, cfg.damping, cfg.tol, cfg.max_iter))
        elif name == "topic":
            out.append(topic_coherence_rank(doc, cands, res.topic_model, iterations=cfg.infer_iterations,
                                            seed=doc_seed(cfg.seed, doc.doc_id)))
        elif name == "external":
            scores = load_external_scores(res.external_scores, doc.doc_id)
            out.append(external_score_rank(cands, scores))
        elif name == "unfamiliarity":
            out.append(unfamiliarity_rank(cands, cfg.familiarity_threshold))
        elif name == "semantic_type":
            out.append(semantic_type_rank(cands, res.preferred_types))
    return out


def rank_document(doc: Document, res: Resources, cfg: PipelineConfig, method: str,
                  d_values=None) -> list[FusedRanking]:
    """Rankings of one document, one per ``d`` when ``d_values`` is given (fit only)."""
    cands = res.candidates[doc.doc_id]
    if not cands:
        return [FusedRanking(method, (), {}) for _ in (d_values or [None])]
    rankers = document_rankers(doc, cands, res, cfg, needed_rankers(cfg, method))
    if method in SINGLE_METHODS:
        return [single_ranking(cands, rankers[0])]
    if d_values is not None:
        return [fuse("fit", cands, rankers, d=d, tol=cfg.tol, max_iter=cfg.max_iter) for d in d_values]
    return [fuse(method, cands, rankers, d=cfg.d, rrf_k=cfg.rrf_k, tol=cfg.tol, max_iter=cfg.max_iter)]


def rank_corpus(cfg: PipelineConfig, method: str, res: Resources, d_values=None) -> list[dict[str, FusedRanking]]:
    """Rank every document; returns one ``{doc_id: ranking}`` map per ``d`` value
    (a single map when ``d_values`` is None)."""
    docs = list(res.corpus)

    def work(doc):
        return rank_document(doc, res, cfg, method, d_values)

    if cfg.jobs > 1:
        with ThreadPoolExecutor(cfg.jobs) as pool:
            results = list(pool.map(work, docs))
    else:
        results = [work(doc) for doc in docs]
    n_out = len(d_values) if d_values is not None else 1
    return [{doc.doc_id: res_[k] for doc, res_ in zip(docs, results)} for k in range(n_out)]


def ranking_tsv(doc_id: str, ranking: FusedRanking) -> str:
    lines = ["doc_id\trank\tterm\tscore\tmethod"]
    for pos, (term, score) in enumerate(ranking.entries, 1):
        lines.append(f"{doc_id}\t{pos}\t{term}\t{score:.6g}\t{ranking.method}")
    return "\n".join(lines) + "\n"


def read_ranking_tsv(path) -> list[tuple[str, float]]:
    entries = []
    for line in Path(path).read_text(encoding="utf-8").splitlines()[1:]:
        if line:
            _, _, term, score, _ = line.split("\t")
            entries.append((term, float(score)))
    return entries


def write_atomic(path, text: str):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)
