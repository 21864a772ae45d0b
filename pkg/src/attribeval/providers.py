"""Paraphrase/completion providers and the append-only transcript log.

Generation calls are cached by prompt hash so a pipeline re-run with the
same inputs never re-invokes a provider. Three providers ship here:

- IdentityProvider: returns the prompt's text slot unchanged (offline).
- ReplayProvider: answers only from a recorded transcript file.
- HttpProvider: POST /generate against a remote completion endpoint.
"""

from __future__ import annotations

import datetime as _dt
import hashlib
import json
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol, runtime_checkable

import httpx
from filelock import FileLock


def prompt_hash(prompt: str) -> str:
    return hashlib.sha256(prompt.encode("utf-8")).hexdigest()


class ProviderError(RuntimeError):
    """Generation failed; carries the prompt hash so the call can be retried."""

    def __init__(self, message: str, prompt_hash: str):
        super().__init__(message)
        self.prompt_hash = prompt_hash


@runtime_checkable
class ParaphraseProvider(Protocol):
    provider_id: str

    def generate(self, prompt: str) -> str: ...


@dataclass(frozen=True)
class GenerationTranscript:
    prompt_hash: str
    prompt: str
    completion: str
    provider_id: str
    recorded_at: str

    def to_json(self) -> str:
        return json.dumps(
            {
                "prompt_hash": self.prompt_hash,
                "prompt": self.prompt,
                "completion": self.completion,
                "provider_id": self.provider_id,
                "recorded_at": self.recorded_at,
            },
            ensure_ascii=False,
            sort_keys=True,
        )

    @staticmethod
    def from_json(line: str) -> "GenerationTranscript":
        obj = json.loads(line)
        return GenerationTranscript(
            prompt_hash=obj["prompt_hash"],
            prompt=obj["prompt"],
            completion=obj["completion"],
            provider_id=obj["provider_id"],
            recorded_at=obj["recorded_at"],
        )


class TranscriptStore:
    """Append-only JSONL log of generation transcripts, keyed by prompt hash.

    Appends take a file lock so only one writer touches the log at a time;
    lookups run against the in-memory index.
    """

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._by_hash: dict[str, GenerationTranscript] = {}
        if self.path.is_file():
            for line in self.path.read_text(encoding="utf-8").splitlines():
                if not line.strip():
                    continue
                rec = GenerationTranscript.from_json(line)
                self._by_hash[rec.prompt_hash] = rec

    def get(self, prompt_hash_: str) -> GenerationTranscript | None:
        return self._by_hash.get(prompt_hash_)

    def append(self, rec: GenerationTranscript) -> None:
        if rec.prompt_hash != prompt_hash(rec.prompt):
            raise ValueError("transcript prompt_hash does not match its prompt")
        self.path.parent.mkdir(parents=True, exist_ok=True)
        lock = FileLock(str(self.path) + ".lock")
        with lock:
            with self.path.open("a", encoding="utf-8") as fh:
                fh.write(rec.to_json() + "\n")
        self._by_hash[rec.prompt_hash] = rec

    def __len__(self) -> int:
        return len(self._by_hash)


def _now() -> str:
    return _dt.datetime.now(_dt.timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


class IdentityProvider:
    """Returns the prompt's text slot verbatim. Deterministic and offline;
    counts its calls so tests can assert cache behavior."""

    provider_id = "mock-identity"

    def __init__(self):
        self.calls = 0

    def generate(self, prompt: str) -> str:
        # Imported lazily; summarize imports this module for the protocol.
        from .summarize import ABSTRACTIVE_TEMPLATE, REWRITE_TEMPLATE, extract_slot

        self.calls += 1
        for template in (ABSTRACTIVE_TEMPLATE, REWRITE_TEMPLATE):
            slot = extract_slot(prompt, template)
            if slot is not None:
                return slot
        return prompt


class ReplayProvider:
    """Answers exclusively from a recorded transcript file; a prompt with
    no recorded completion is an error rather than a silent fallback."""

    provider_id = "replay"

    def __init__(self, transcript_path: str | Path):
        self._store = TranscriptStore(transcript_path)
        self.calls = 0

    def generate(self, prompt: str) -> str:
        self.calls += 1
        h = prompt_hash(prompt)
        rec = self._store.get(h)
        if rec is None:
            raise ProviderError(f"no recorded completion for prompt {h[:12]}", h)
        return rec.completion


class HttpProvider:
    """Remote completion endpoint speaking the generate wire protocol:
    POST {endpoint}/generate {"prompt": ..., "max_tokens"?, "provider_params"?}
    -> {"completion": ...}.
    """

    def __init__(
        self,
        endpoint: str,
        *,
        max_tokens: int | None = None,
        provider_params: dict | None = None,
        retries: int = 3,
        backoff_s: float = 0.5,
        client: httpx.Client | None = None,
    ):
        self.endpoint = endpoint.rstrip("/")
        self.provider_id = f"http:{self.endpoint}"
        self.max_tokens = max_tokens
        self.provider_params = provider_params
        self.retries = retries
        self.backoff_s = backoff_s
        self._client = client or httpx.Client(timeout=60.0)

    def generate(self, prompt: str) -> str:
        payload: dict = {"prompt": prompt}
        if self.max_tokens is not None:
            payload["max_tokens"] = self.max_tokens
        if self.provider_params is not None:
            payload["provider_params"] = self.provider_params
        h = prompt_hash(prompt)
        last_error: Exception | None = None
        for attempt in range(self.retries + 1):
            try:
                resp = self._client.post(f"{self.endpoint}/generate", json=payload)
                resp.raise_for_status()
                return resp.json()["completion"]
            except (httpx.HTTPError, KeyError, ValueError) as exc:
                last_error = exc
                if attempt < self.retries:
                    time.sleep(self.backoff_s * (2**attempt))
        raise ProviderError(f"generate failed after retries: {last_error}", h)


def generate_cached(
    provider: ParaphraseProvider,
    prompt: str,
    transcripts: TranscriptStore | None = None,
) -> str:
    """Generate with transcript caching: a cache hit short-circuits the
    provider entirely; a miss records the new transcript."""
    h = prompt_hash(prompt)
    if transcripts is not None:
        hit = transcripts.get(h)
        if hit is not None:
            return hit.completion
    try:
        completion = provider.generate(prompt)
    except ProviderError:
        raise
    except Exception as exc:
        raise ProviderError(f"provider {provider.provider_id} failed: {exc}", h) from exc
    if transcripts is not None:
        transcripts.append(
            GenerationTranscript(
                prompt_hash=h,
                prompt=prompt,
                completion=completion,
                provider_id=provider.provider_id,
                recorded_at=_now(),
            )
        )
    return completion
