"""HTTP client for a remote scorer speaking the shared wire protocol:

POST /embed {"texts": [...]}            -> {"vectors": [[...]], "dim": N}
POST /nli   {"pairs": [{"premise", "hypothesis"}]} -> {"probs": [{"entail", "neutral", "contradict"}]}
GET  /health                            -> {"model_ids": [...]}
"""

from __future__ import annotations

import numpy as np
import httpx

from .attribution import ScorerError


class HttpScorer:
    supports_concurrency = False  # requests serialized through one client

    def __init__(self, endpoint: str, *, client: httpx.Client | None = None):
        self.endpoint = endpoint.rstrip("/")
        self.scorer_id = f"http:{self.endpoint}"
        self._client = client or httpx.Client(timeout=120.0)

    def _post(self, path: str, payload: dict) -> dict:
        try:
            resp = self._client.post(f"{self.endpoint}{path}", json=payload)
            resp.raise_for_status()
            return resp.json()
        except httpx.HTTPError as exc:
            raise ScorerError(f"scorer request {path} failed: {exc}", retryable=True) from exc

    def embed(self, texts: list[str]) -> np.ndarray:
        if not texts:
            return np.zeros((0, 0), dtype=np.float64)
        body = self._post("/embed", {"texts": list(texts)})
        vectors = np.asarray(body["vectors"], dtype=np.float64)
        if vectors.ndim != 2 or vectors.shape != (len(texts), body["dim"]):
            raise ScorerError(f"embed response shape {vectors.shape} inconsistent")
        return vectors

    def nli(self, pairs: list[tuple[str, str]]) -> np.ndarray:
        body = self._post(
            "/nli",
            {"pairs": [{"premise": p, "hypothesis": h} for p, h in pairs]},
        )
        probs = body["probs"]
        if len(probs) != len(pairs):
            raise ScorerError("nli response length mismatch")
        return np.asarray(
            [[p["entail"], p["neutral"], p["contradict"]] for p in probs],
            dtype=np.float64,
        )

    def health(self) -> dict:
        try:
            resp = self._client.get(f"{self.endpoint}/health")
            resp.raise_for_status()
            return resp.json()
        except httpx.HTTPError as exc:
            raise ScorerError(f"scorer health check failed: {exc}", retryable=True) from exc
