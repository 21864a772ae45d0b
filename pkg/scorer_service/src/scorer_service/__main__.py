"""Run the scorer service: ``python -m scorer_service``.

Configuration comes from environment variables:
SCORER_NLI_MODEL, SCORER_EMBED_MODEL, SCORER_DEVICE, SCORER_BATCH_SIZE,
SCORER_MAX_CHARS, SCORER_HOST, SCORER_PORT, and SCORER_BACKEND=stub for
the offline deterministic backend.
"""

import os

import uvicorn

from .app import create_app
from .backends import DeterministicStubBackend, ModelConfig


def main() -> None:
    config = ModelConfig(
        nli_model_id=os.environ.get("SCORER_NLI_MODEL", "roberta-large-mnli"),
        embed_model_id=os.environ.get(
            "SCORER_EMBED_MODEL", "sentence-transformers/sentence-t5-xxl"
        ),
        device=os.environ.get("SCORER_DEVICE", "cpu"),
        batch_size=int(os.environ.get("SCORER_BATCH_SIZE", "16")),
        max_chars=int(os.environ.get("SCORER_MAX_CHARS", "4000")),
    )
    backend = None
    if os.environ.get("SCORER_BACKEND") == "stub":
        backend = DeterministicStubBackend()
    app = create_app(config, backend=backend)
    uvicorn.run(
        app,
        host=os.environ.get("SCORER_HOST", "127.0.0.1"),
        port=int(os.environ.get("SCORER_PORT", "8100")),
        log_level="warning",
    )


if __name__ == "__main__":
    main()
