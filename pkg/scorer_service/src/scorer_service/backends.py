"""Model backends for the scorer service.

A backend produces raw embeddings and NLI probabilities in whatever label
order its model uses; the service layer normalizes vectors and maps labels
to the wire order (entail, neutral, contradict). Keeping the mapping in
one place, checked by a startup probe, prevents the classic label-order
bug when swapping NLI checkpoints.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Protocol, Sequence

import numpy as np


@dataclass
class ModelConfig:
    nli_model_id: str = "roberta-large-mnli"
    embed_model_id: str = "sentence-transformers/sentence-t5-xxl"
    device: str = "cpu"
    batch_size: int = 16
    max_chars: int = 4000  # longer inputs are truncated and flagged

    def __post_init__(self) -> None:
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size}")


class Backend(Protocol):
    nli_model_id: str
    embed_model_id: str

    def embed_raw(self, texts: Sequence[str]) -> np.ndarray:
        """(n, dim) float array; need not be normalized."""
        ...

    def nli_raw(self, pairs: Sequence[tuple[str, str]]) -> np.ndarray:
        """(n, 3) probabilities in the model's own label order."""
        ...

    def nli_label_names(self) -> tuple[str, str, str]:
        """The model's label names, aligned with nli_raw columns."""
        ...


def wire_label_permutation(names: Sequence[str]) -> tuple[int, int, int]:
    """Map the model's label names onto wire order (entail, neutral,
    contradict). Matching is by prefix so ENTAILMENT/entailment/entail all
    work; an unrecognizable label set is an error, never a guess."""
    slots: dict[str, int] = {}
    for idx, name in enumerate(names):
        low = name.lower()
        if low.startswith("entail"):
            slots["entail"] = idx
        elif low.startswith("neutral"):
            slots["neutral"] = idx
        elif low.startswith("contra"):
            slots["contradict"] = idx
    if set(slots) != {"entail", "neutral", "contradict"}:
        raise ValueError(f"cannot map NLI label names {tuple(names)!r} onto the wire order")
    return slots["entail"], slots["neutral"], slots["contradict"]


class TransformersBackend:
    """Real models: a sequence-classification NLI checkpoint plus a
    sentence-transformers encoder. Loaded lazily so the service module can
    be imported without the model stack installed."""

    def __init__(self, config: ModelConfig):
        import torch
        from sentence_transformers import SentenceTransformer
        from transformers import AutoModelForSequenceClassification, AutoTokenizer

        self.config = config
        self.nli_model_id = config.nli_model_id
        self.embed_model_id = config.embed_model_id
        self._torch = torch
        self._tokenizer = AutoTokenizer.from_pretrained(config.nli_model_id)
        self._nli_model = AutoModelForSequenceClassification.from_pretrained(
            config.nli_model_id
        ).to(config.device)
        self._nli_model.eval()
        id2label = self._nli_model.config.id2label
        self._label_names = tuple(id2label[i] for i in range(len(id2label)))
        self._encoder = SentenceTransformer(config.embed_model_id, device=config.device)

    def embed_raw(self, texts: Sequence[str]) -> np.ndarray:
        return np.asarray(
            self._encoder.encode(
                list(texts),
                batch_size=self.config.batch_size,
                convert_to_numpy=True,
                normalize_embeddings=False,
                show_progress_bar=False,
            ),
            dtype=np.float64,
        )

    def nli_raw(self, pairs: Sequence[tuple[str, str]]) -> np.ndarray:
        torch = self._torch
        out = []
        for start in range(0, len(pairs), self.config.batch_size):
            chunk = pairs[start : start + self.config.batch_size]
            enc = self._tokenizer(
                [p for p, _ in chunk],
                [h for _, h in chunk],
                return_tensors="pt",
                padding=True,
                truncation=True,
            ).to(self.config.device)
            with torch.no_grad():
                logits = self._nli_model(**enc).logits
            out.append(torch.softmax(logits, dim=-1).cpu().numpy())
        return np.concatenate(out, axis=0).astype(np.float64)

    def nli_label_names(self) -> tuple[str, str, str]:
        return self._label_names


class DeterministicStubBackend:
    """Offline stand-in with real-model ergonomics: lexical similarity
    heuristics behind the same interface, with probabilities deliberately
    emitted in the common MNLI checkpoint order (contradiction, neutral,
    entailment) so the service's label mapping is genuinely exercised."""

    def __init__(self, label_names: tuple[str, str, str] | None = None, dim: int = 64):
        self.nli_model_id = "stub-nli"
        self.embed_model_id = "stub-embed"
        self.dim = dim
        self._label_names = label_names or ("CONTRADICTION", "NEUTRAL", "ENTAILMENT")

    def embed_raw(self, texts: Sequence[str]) -> np.ndarray:
        import hashlib

        out = np.zeros((len(texts), self.dim), dtype=np.float64)
        for row, text in enumerate(texts):
            for token in text.lower().split():
                digest = hashlib.blake2s(token.encode("utf-8"), digest_size=4).digest()
                # unnormalized counts; the service is responsible for norms
                out[row, int.from_bytes(digest, "big") % self.dim] += 1.0
        return out

    def nli_raw(self, pairs: Sequence[tuple[str, str]]) -> np.ndarray:
        probs = np.zeros((len(pairs), 3), dtype=np.float64)
        for row, (premise, hypothesis) in enumerate(pairs):
            prem = set(premise.lower().split())
            hyp = set(hypothesis.lower().split())
            entail = len(prem & hyp) / len(hyp) if hyp else 0.0
            by_name = {"entail": entail, "neutral": 1.0 - entail, "contradict": 0.0}
            for col, name in enumerate(self._label_names):
                low = name.lower()
                key = ("entail" if low.startswith("entail")
                       else "neutral" if low.startswith("neutral") else "contradict")
                probs[row, col] = by_name[key]
        return probs

    def nli_label_names(self) -> tuple[str, str, str]:
        return self._label_names
