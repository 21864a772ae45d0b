"""Built-in deterministic lexical scorer.

Offline stand-in for the neural embedding and entailment models: embeddings
are L2-normalized hashed character-trigram counts, and entailment is the
fraction of hypothesis word bigrams contained in the premise. Platform
stable because the trigram hash is a keyed blake2s with a pinned key.
"""

from __future__ import annotations

import hashlib

import numpy as np

from .corpus import normalize_ws, word_tokens

EMBED_DIM = 512
_HASH_KEY = b"attribeval-lexical-v1"


def _trigram_slot(trigram: str) -> int:
    digest = hashlib.blake2s(
        trigram.encode("utf-8"), key=_HASH_KEY, digest_size=4
    ).digest()
    return int.from_bytes(digest, "big") % EMBED_DIM


def embed_text(text: str) -> np.ndarray:
    """Unit-norm hashed character-trigram count vector; the zero vector for
    texts with no trigrams (empty after normalization)."""
    norm = normalize_ws(text).lower()
    padded = f" {norm} " if norm else ""
    vec = np.zeros(EMBED_DIM, dtype=np.float64)
    for i in range(len(padded) - 2):
        vec[_trigram_slot(padded[i : i + 3])] += 1.0
    length = float(np.linalg.norm(vec))
    if length > 0:
        vec /= length
    return vec


def entail_probability(premise: str, hypothesis: str) -> float:
    """Containment of the hypothesis's word bigrams in the premise, falling
    back to unigram containment for one-token hypotheses."""
    prem_toks = word_tokens(premise)
    hyp_toks = word_tokens(hypothesis)
    hyp_bigrams = {(hyp_toks[i], hyp_toks[i + 1]) for i in range(len(hyp_toks) - 1)}
    if hyp_bigrams:
        prem_bigrams = {
            (prem_toks[i], prem_toks[i + 1]) for i in range(len(prem_toks) - 1)
        }
        return len(hyp_bigrams & prem_bigrams) / len(hyp_bigrams)
    if hyp_toks:
        return len(set(hyp_toks) & set(prem_toks)) / len(set(hyp_toks))
    return 0.0


class LexicalScorer:
    """Scorer-protocol implementation over the lexical heuristics above.

    NLI probabilities are calibrated as entail = bigram containment,
    contradict = 0, neutral = 1 - entail, which keeps them on the
    probability simplex.
    """

    scorer_id = "builtin-lexical"
    supports_concurrency = True
    dim = EMBED_DIM

    def embed(self, texts: list[str]) -> np.ndarray:
        if not texts:
            return np.zeros((0, EMBED_DIM), dtype=np.float64)
        return np.stack([embed_text(t) for t in texts])

    def nli(self, pairs: list[tuple[str, str]]) -> np.ndarray:
        out = np.zeros((len(pairs), 3), dtype=np.float64)
        for k, (premise, hypothesis) in enumerate(pairs):
            entail = entail_probability(premise, hypothesis)
            out[k] = (entail, 1.0 - entail, 0.0)
        return out
