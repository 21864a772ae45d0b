"""The scorer service: /embed, /nli, and /health per the shared wire
protocol. Embeddings leave here L2-normalized; NLI probabilities leave in
(entail, neutral, contradict) order no matter how the underlying model
indexes its labels, enforced by a startup probe."""

from __future__ import annotations

import numpy as np
from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from .backends import Backend, ModelConfig, wire_label_permutation

# The probe pair has one certain answer: a sentence entails itself. If the
# mapped entail probability is not the argmax, the label mapping is wired
# wrong and the service must not come up.
PROBE_PREMISE = "A crew repaired the damaged bridge after the storm passed."
PROBE_HYPOTHESIS = "A crew repaired the damaged bridge after the storm passed."


class EmbedRequest(BaseModel):
    texts: list[str]


class NliPair(BaseModel):
    premise: str
    hypothesis: str


class NliRequest(BaseModel):
    pairs: list[NliPair]


class LabelOrderError(RuntimeError):
    pass


def run_label_probe(backend: Backend) -> tuple[int, int, int]:
    """Resolve the label permutation and verify it on the probe pair."""
    perm = wire_label_permutation(backend.nli_label_names())
    raw = backend.nli_raw([(PROBE_PREMISE, PROBE_HYPOTHESIS)])[0]
    mapped = raw[list(perm)]
    if int(np.argmax(mapped)) != 0:
        raise LabelOrderError(
            f"label-order probe failed: mapped probabilities {mapped.tolist()} "
            f"do not put entail first for a self-entailing pair "
            f"(model labels {backend.nli_label_names()!r})"
        )
    return perm


def create_app(config: ModelConfig, backend: Backend | None = None) -> FastAPI:
    app = FastAPI(title="attribeval scorer service")
    state: dict = {"backend": None, "perm": None, "error": None}

    try:
        if backend is None:
            from .backends import TransformersBackend

            backend = TransformersBackend(config)
        state["perm"] = run_label_probe(backend)
        state["backend"] = backend
    except LabelOrderError:
        raise  # a miswired mapping is a bug, not a degraded mode
    except Exception as exc:  # model load failure -> degraded health
        state["error"] = str(exc)

    def live_backend() -> Backend:
        if state["backend"] is None:
            raise HTTPException(status_code=503, detail=f"models unavailable: {state['error']}")
        return state["backend"]

    def truncate(texts: list[str]) -> tuple[list[str], list[int]]:
        clipped, flagged = [], []
        for i, text in enumerate(texts):
            if len(text) > config.max_chars:
                clipped.append(text[: config.max_chars])
                flagged.append(i)
            else:
                clipped.append(text)
        return clipped, flagged

    @app.post("/embed")
    def embed(req: EmbedRequest):
        backend = live_backend()
        texts, truncated = truncate(req.texts)
        if not texts:
            return {"vectors": [], "dim": 0, "truncated": []}
        vectors = np.zeros((0, 0))
        for start in range(0, len(texts), config.batch_size):
            chunk = backend.embed_raw(texts[start : start + config.batch_size])
            vectors = chunk if vectors.size == 0 else np.vstack([vectors, chunk])
        norms = np.linalg.norm(vectors, axis=1, keepdims=True)
        norms[norms == 0] = 1.0
        vectors = vectors / norms
        return {
            "vectors": vectors.tolist(),
            "dim": int(vectors.shape[1]),
            "truncated": truncated,
        }

    @app.post("/nli")
    def nli(req: NliRequest):
        backend = live_backend()
        premises, trunc_p = truncate([p.premise for p in req.pairs])
        hypotheses, trunc_h = truncate([p.hypothesis for p in req.pairs])
        pairs = list(zip(premises, hypotheses))
        probs = np.zeros((0, 3))
        for start in range(0, len(pairs), config.batch_size):
            chunk = backend.nli_raw(pairs[start : start + config.batch_size])
            probs = chunk if probs.size == 0 else np.vstack([probs, chunk])
        perm = state["perm"]
        out = []
        for row in probs:
            mapped = row[list(perm)]
            total = float(mapped.sum())
            if total > 0:
                mapped = mapped / total
            out.append(
                {
                    "entail": float(mapped[0]),
                    "neutral": float(mapped[1]),
                    "contradict": float(mapped[2]),
                }
            )
        return {"probs": out, "truncated": sorted(set(trunc_p) | set(trunc_h))}

    @app.get("/health")
    def health():
        if state["backend"] is None:
            return {"status": "degraded", "model_ids": [], "error": state["error"]}
        return {
            "status": "ok",
            "model_ids": [
                state["backend"].nli_model_id,
                state["backend"].embed_model_id,
            ],
        }

    return app
