import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

FIXTURES = ROOT / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def synthetic_manifest() -> Path:
    return FIXTURES / "corpus" / "synthetic_manifest.yaml"


@pytest.fixture(scope="session")
def synthetic_topic(synthetic_manifest):
    from attribeval.corpus import ingest

    return ingest(synthetic_manifest)[0]
