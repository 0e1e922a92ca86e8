"""Unsupervised ensemble ranking of candidate terms within documents.

Single-view rankers (TF-IDF, SingleRank, topic coherence, external scores,
term unfamiliarity, semantic type) are fused by a biased random walk over a
term preference graph, with CombSum, Condorcet fuse and reciprocal rank
fusion as baselines.
"""

__version__ = "0.1.0"

from .corpus import (CandidateTerm, Corpus, Document, Lexicon, LexiconEntry, extract_candidates,
                     import_candidates, load_corpus, load_lexicon, tokenize)
from .evaluation import (EvalReport, auc_ke, auc_ranking, evaluate_corpus, load_gold, prf_at_n,
                         relaxed_match)
from .fusion import (FusedRanking, FusionGraph, build_fusion_graph, combsum_rank, condorcet_rank,
                     edge_weight, fit_rank, jump_distribution, rank_relation, rrf_rank)
from .rankers import (RankerOutput, build_cooccurrence_graph, external_score_rank, select_preferred_types,
                      semantic_type_rank, singlerank_rank, tfidf_rank, topic_coherence_rank,
                      unfamiliarity_rank)
from .topics import DocTopicDistribution, TopicModel, infer_doc_topics, train_lda
from .walk import WalkGraph, stationary_scores

__all__ = [
    "CandidateTerm", "Corpus", "Document", "Lexicon", "LexiconEntry", "extract_candidates",
    "import_candidates", "load_corpus", "load_lexicon", "tokenize",
    "EvalReport", "auc_ke", "auc_ranking", "evaluate_corpus", "load_gold", "prf_at_n", "relaxed_match",
    "FusedRanking", "FusionGraph", "build_fusion_graph", "combsum_rank", "condorcet_rank", "edge_weight",
    "fit_rank", "jump_distribution", "rank_relation", "rrf_rank",
    "RankerOutput", "build_cooccurrence_graph", "external_score_rank", "select_preferred_types",
    "semantic_type_rank", "singlerank_rank", "tfidf_rank", "topic_coherence_rank", "unfamiliarity_rank",
    "DocTopicDistribution", "TopicModel", "infer_doc_topics", "train_lda",
    "WalkGraph", "stationary_scores",
]
