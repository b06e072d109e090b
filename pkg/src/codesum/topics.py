"""Latent-topic extraction over a project's methods.

Documents are methods, terms are preprocessed keywords.  Fitting is plain
collapsed Gibbs sampling with a seeded generator, so identical inputs give
bit-identical models.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass

import numpy as np


def choose_topic_count(num_methods: int) -> int:
    """Topic count as a function of corpus size.

    Anchored at 100 topics for 20,000 methods and 300 for 40,000; linear in
    between, proportional (1 topic per 200 methods, clamped to [10, 100])
    below.
    """
    if num_methods < 1:
        raise ValueError("num_methods must be >= 1")
    if num_methods <= 20000:
        return max(10, min(100, round(num_methods / 200)))
    if num_methods >= 40000:
        return 300
    return round(100 + (num_methods - 20000) / 20000 * 200)


@dataclass
class TopicModel:
    T: int
    alpha: float
    beta: float
    seed: int
    iterations: int
    vocabulary: list[str]
    doc_ids: list[str]
    topic_word_counts: np.ndarray  # T x V
    doc_topic_counts: np.ndarray  # D x T
    assignments: list[np.ndarray]  # per doc, topic of each token

    def phi(self) -> np.ndarray:
        """Topic-word distributions (rows sum to 1)."""
        counts = self.topic_word_counts + self.beta
        return counts / counts.sum(axis=1, keepdims=True)

    def theta(self) -> np.ndarray:
        """Document-topic distributions (rows sum to 1)."""
        counts = self.doc_topic_counts + self.alpha
        return counts / counts.sum(axis=1, keepdims=True)

    def to_json(self) -> dict:
        return {
            "T": self.T,
            "alpha": self.alpha,
            "beta": self.beta,
            "seed": self.seed,
            "iterations": self.iterations,
            "vocabulary": self.vocabulary,
            "doc_ids": self.doc_ids,
            "topic_word_counts": self.topic_word_counts.tolist(),
            "doc_topic_counts": self.doc_topic_counts.tolist(),
            "assignments": [a.tolist() for a in self.assignments],
        }

    @staticmethod
    def from_json(doc: dict) -> "TopicModel":
        return TopicModel(
            T=doc["T"],
            alpha=doc["alpha"],
            beta=doc["beta"],
            seed=doc["seed"],
            iterations=doc["iterations"],
            vocabulary=list(doc["vocabulary"]),
            doc_ids=list(doc["doc_ids"]),
            topic_word_counts=np.array(doc["topic_word_counts"], dtype=np.int64),
            doc_topic_counts=np.array(doc["doc_topic_counts"], dtype=np.int64),
            assignments=[np.array(a, dtype=np.int64) for a in doc["assignments"]],
        )

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def fit_lda(
    docs: list[tuple[str, dict[str, int]]],
    T: int,
    alpha: float | None = None,
    beta: float = 0.01,
    iterations: int = 1000,
    seed: int = 0,
) -> TopicModel:
    """Collapsed Gibbs sampling over (doc id, keyword counts) documents.

    Empty documents are skipped with a warning; an empty vocabulary or more
    topics than vocabulary words is an error.
    """
    if T < 2:
        raise ValueError("T must be >= 2")
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    if alpha is None:
        alpha = 50.0 / T

    kept: list[tuple[str, dict[str, int]]] = []
    for doc_id, counts in docs:
        if sum(counts.values()) == 0:
            warnings.warn(f"skipping empty document {doc_id!r}")
            continue
        kept.append((doc_id, counts))
    vocab = sorted({w for _id, counts in kept for w in counts})
    if not vocab:
        raise ValueError("empty vocabulary")
    if T > len(vocab):
        raise ValueError(f"T={T} exceeds vocabulary size {len(vocab)}")
    word_ix = {w: i for i, w in enumerate(vocab)}

    docs_tokens: list[np.ndarray] = []
    for _id, counts in kept:
        toks: list[int] = []
        for w in sorted(counts):
            toks.extend([word_ix[w]] * counts[w])
        docs_tokens.append(np.array(toks, dtype=np.int64))

    rng = np.random.Generator(np.random.PCG64(seed))
    D, V = len(kept), len(vocab)
    n_tw = np.zeros((T, V), dtype=np.int64)
    n_dt = np.zeros((D, T), dtype=np.int64)
    n_t = np.zeros(T, dtype=np.int64)
    assignments: list[np.ndarray] = []
    for d, toks in enumerate(docs_tokens):
        z = rng.integers(0, T, size=len(toks))
        for pos, w in enumerate(toks):
            k = z[pos]
            n_tw[k, w] += 1
            n_dt[d, k] += 1
            n_t[k] += 1
        assignments.append(z)

    vbeta = V * beta
    for _sweep in range(iterations):
        for d, toks in enumerate(docs_tokens):
            z = assignments[d]
            for pos in range(len(toks)):
                w = toks[pos]
                k = z[pos]
                n_tw[k, w] -= 1
                n_dt[d, k] -= 1
                n_t[k] -= 1
                p = (n_dt[d] + alpha) * (n_tw[:, w] + beta) / (n_t + vbeta)
                p /= p.sum()
                k = int(rng.choice(T, p=p))
                z[pos] = k
                n_tw[k, w] += 1
                n_dt[d, k] += 1
                n_t[k] += 1

    return TopicModel(
        T=T,
        alpha=alpha,
        beta=beta,
        seed=seed,
        iterations=iterations,
        vocabulary=vocab,
        doc_ids=[doc_id for doc_id, _c in kept],
        topic_word_counts=n_tw,
        doc_topic_counts=n_dt,
        assignments=assignments,
    )


def top_topics(model: TopicModel, k: int, words_per_topic: int = 10) -> list[tuple[int, list[str]]]:
    """The k topics with the most corpus mass, each with its top words by
    phi (ties broken by vocabulary order)."""
    if k > model.T:
        raise ValueError("k exceeds the number of topics")
    mass = model.topic_word_counts.sum(axis=1)
    order = sorted(range(model.T), key=lambda t: (-mass[t], t))[:k]
    phi = model.phi()
    out = []
    for t in order:
        ranked = sorted(range(len(model.vocabulary)), key=lambda v: (-phi[t, v], v))
        out.append((t, [model.vocabulary[v] for v in ranked[:words_per_topic]]))
    return out


def tag_methods(model: TopicModel, n_per_topic: int = 10) -> dict[int, list[str]]:
    """Per topic: methods ranked by theta (ties broken by id)."""
    theta = model.theta()
    out: dict[int, list[str]] = {}
    for t in range(model.T):
        ranked = sorted(
            range(len(model.doc_ids)), key=lambda d: (-theta[d, t], model.doc_ids[d])
        )
        out[t] = [model.doc_ids[d] for d in ranked[:n_per_topic]]
    return out


def dominant_topics(model: TopicModel) -> dict[str, int]:
    """Each document's argmax topic."""
    theta = model.theta()
    return {doc_id: int(np.argmax(theta[d])) for d, doc_id in enumerate(model.doc_ids)}
