import numpy as np
import pytest

from fitrank.corpus import Document
from fitrank.topics import TopicModel, infer_doc_topics, topic_tokens, train_lda

A = [f"alpha{i}" for i in range(20)]
B = [f"beta{i}" for i in range(20)]


def two_vocab_corpus(n_docs=100, length=50, seed=0):
    rng = np.random.default_rng(seed)
    docs = []
    for d in range(n_docs):
        vocab = A if d % 2 == 0 else B
        docs.append(Document(f"d{d}", " ".join(rng.choice(vocab, length))))
    return docs


def test_single_topic_phi_is_smoothed_unigram():
    docs = [Document("a", "fever cough fever the"), Document("b", "liver fever")]
    m = train_lda(docs, K=1, beta=0.01, iterations=5, seed=1)
    counts = {"cough": 1, "fever": 3, "liver": 1}
    V, total = 3, 5
    assert m.vocabulary == ("cough", "fever", "liver")
    expected = [(counts[w] + 0.01) / (total + V * 0.01) for w in m.vocabulary]
    assert m.phi[0].tolist() == pytest.approx(expected, abs=1e-15)
    assert infer_doc_topics(m, docs[0]).theta.tolist() == [1.0]


def test_stopwords_are_ignored():
    assert topic_tokens(Document("d", "The fever and the cough")) == ["fever", "cough"]
    with pytest.raises(ValueError):
        train_lda([Document("d", "the and of")], K=2)


def test_two_vocabularies_separate():
    # alpha = 50/K would cap a 50-word fold-in at (50 + 25) / (50 + 50)
    docs = two_vocab_corpus()
    m = train_lda(docs, K=2, alpha=0.1, iterations=500, seed=0)
    for k in range(2):
        top = [m.vocabulary[i] for i in np.argsort(-m.phi[k])[:10]]
        share = max(sum(w in A for w in top), sum(w in B for w in top)) / 10
        assert share >= 0.9
    a_topic = int(np.argmax([m.phi[k, [m.word_index[w] for w in A]].sum() for k in range(2)]))
    for vocab, topic in ((A, a_topic), (B, 1 - a_topic)):
        held = Document("held", " ".join(np.random.default_rng(1).choice(vocab, 50)))
        assert infer_doc_topics(m, held, iterations=100, seed=5).theta[topic] >= 0.9


def test_fixed_seed_is_bit_identical():
    docs = two_vocab_corpus(20, 20)
    a = train_lda(docs, K=3, iterations=30, seed=9)
    b = train_lda(docs, K=3, iterations=30, seed=9)
    assert np.array_equal(a.phi, b.phi)
    c = train_lda(docs, K=3, iterations=30, seed=10)
    assert not np.array_equal(a.phi, c.phi)


def test_out_of_vocabulary_document_is_uniform():
    m = train_lda(two_vocab_corpus(10, 10), K=4, iterations=5)
    theta = infer_doc_topics(m, Document("x", "zzz qqq the")).theta
    assert theta.tolist() == [0.25] * 4


def test_json_round_trip_keeps_phi_and_theta(tmp_path):
    m = train_lda(two_vocab_corpus(10, 10), K=2, iterations=5)
    m2 = TopicModel(m.K, m.vocabulary, m.phi, m.alpha, m.beta, m.seed, {"x": np.array([0.3, 0.7])})
    p = tmp_path / "m.json"
    m2.save(p)
    back = TopicModel.load(p)
    assert np.array_equal(back.phi, m.phi) and back.vocabulary == m.vocabulary
    assert back.doc_topics(Document("x", "anything")).theta.tolist() == [0.3, 0.7]


def test_model_validation():
    with pytest.raises(ValueError):
        TopicModel(2, ("a",), np.array([[1.0], [0.5]]), 1.0, 0.01)
    with pytest.raises(ValueError):
        TopicModel(1, ("a", "b"), np.array([[0.5, 0.5]]), 1.0, 0.01, theta={"d": np.array([0.4])})
    with pytest.raises(ValueError):
        train_lda([Document("d", "x")], K=0)
