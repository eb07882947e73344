"""
Test configuration and fixtures for the weighted Erdős–Burgess laboratory.
"""
import sys
from functools import lru_cache
from pathlib import Path

import pytest

# Add src to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from ring_spec import parse_ring  # noqa: E402


@lru_cache(maxsize=None)
def _cached_ring(spec: str):
    return parse_ring(spec)


# ============================================================================
# Environment isolation
# ============================================================================

@pytest.fixture(autouse=True)
def isolated_env(tmp_path, monkeypatch):
    """Keep the result cache and every BURGESS_* knob test-local."""
    for name in (
        "BURGESS_MAX_RING_ORDER",
        "BURGESS_SEARCH_MAX_ORDER",
        "BURGESS_SEARCH_NODE_CAP",
        "BURGESS_SEARCH_DEPTH_CAP",
        "BURGESS_SAMPLE_SEED",
        "BURGESS_SAMPLE_SIZE",
        "BURGESS_CACHE_ENABLED",
        "BURGESS_WORKERS",
        "BURGESS_LOG_LEVEL",
    ):
        monkeypatch.delenv(name, raising=False)
    monkeypatch.setenv("BURGESS_CACHE_PATH", str(tmp_path / "cache" / "results.jsonl"))
    monkeypatch.chdir(tmp_path)
    return tmp_path


# ============================================================================
# Rings
# ============================================================================

@pytest.fixture
def ring_of():
    """Build (and memoize) a ring from its spec."""
    return _cached_ring


@pytest.fixture
def z4():
    return _cached_ring("Z/4")


@pytest.fixture
def z6():
    return _cached_ring("Z/6")


@pytest.fixture
def z8():
    return _cached_ring("Z/8")


@pytest.fixture
def z12():
    return _cached_ring("Z/12")


@pytest.fixture
def gf4():
    return _cached_ring("GF(4)")


@pytest.fixture
def gf8():
    return _cached_ring("GF(8)")


@pytest.fixture
def x_cubed():
    """GF(2)[x]/(x^3)."""
    return _cached_ring("GF(2)[x]/x^3")


@pytest.fixture
def z4_squared():
    return _cached_ring("Z/4 x Z/4")


@pytest.fixture
def gf4_squared():
    return _cached_ring("GF(4) x GF(4)")


def residues(ring, values):
    """Element indices of Z/n residues (or any display values)."""
    return [ring.element_from_display(v) for v in values]


def shown(ring, indices):
    """Display values of element indices."""
    return [ring.display(int(i)) for i in indices]
