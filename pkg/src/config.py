"""
Configuration module for the weighted Erdős–Burgess laboratory.

All knobs are read from environment variables (a ``.env`` file is honoured by
the CLI through python-dotenv). Every section is a dataclass with a
``from_env`` classmethod; ``AppConfig`` aggregates them.
"""
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from exceptions import ConfigurationError

# Bump whenever an engine changes results; invalidates the on-disk cache.
ENGINE_VERSION = "1.0.0"


def _env_int(name: str, default: Optional[int]) -> Optional[int]:
    """Read an integer environment variable, raising ConfigurationError on garbage."""
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ConfigurationError(f"{name} must be an integer, got {raw!r}") from None


def _env_bool(name: str, default: bool) -> bool:
    raw = os.getenv(name)
    if raw is None:
        return default
    return raw.strip().lower() in ("1", "true", "yes", "on")


@dataclass
class RingConfig:
    """Limits applied when constructing rings."""
    max_order: int = 4096

    @classmethod
    def from_env(cls) -> "RingConfig":
        """Create configuration from environment variables."""
        return cls(max_order=_env_int("BURGESS_MAX_RING_ORDER", cls.max_order))


@dataclass
class SearchConfig:
    """
    Budget for the exhaustive free-sequence search.

    Attributes:
        max_order: largest ring order accepted by the search over all of R
        node_cap: number of expanded search states before giving up
        depth_cap: hard depth limit; None means |R|^2
    """
    max_order: int = 64
    node_cap: int = 2_000_000
    depth_cap: Optional[int] = None

    @classmethod
    def from_env(cls) -> "SearchConfig":
        """Create configuration from environment variables."""
        return cls(
            max_order=_env_int("BURGESS_SEARCH_MAX_ORDER", cls.max_order),
            node_cap=_env_int("BURGESS_SEARCH_NODE_CAP", cls.node_cap),
            depth_cap=_env_int("BURGESS_SEARCH_DEPTH_CAP", None),
        )


@dataclass
class ClaimsConfig:
    """Seeds for the randomized structure checks."""
    sample_seed: int = 20240607
    sample_size: int = 20_000

    @classmethod
    def from_env(cls) -> "ClaimsConfig":
        """Create configuration from environment variables."""
        return cls(
            sample_seed=_env_int("BURGESS_SAMPLE_SEED", cls.sample_seed),
            sample_size=_env_int("BURGESS_SAMPLE_SIZE", cls.sample_size),
        )


@dataclass
class CacheConfig:
    """On-disk result cache."""
    path: Path = Path(".burgess_cache") / "results.jsonl"
    enabled: bool = True
    engine_version: str = ENGINE_VERSION

    @classmethod
    def from_env(cls) -> "CacheConfig":
        """Create configuration from environment variables."""
        return cls(
            path=Path(os.getenv("BURGESS_CACHE_PATH", str(cls.path))),
            enabled=_env_bool("BURGESS_CACHE_ENABLED", cls.enabled),
        )


@dataclass
class AppConfig:
    """Main application configuration."""
    ring: RingConfig = field(default_factory=RingConfig)
    search: SearchConfig = field(default_factory=SearchConfig)
    claims: ClaimsConfig = field(default_factory=ClaimsConfig)
    cache: CacheConfig = field(default_factory=CacheConfig)
    workers: int = 1
    log_level: str = "WARNING"

    @classmethod
    def from_env(cls) -> "AppConfig":
        """Create configuration from environment variables."""
        return cls(
            ring=RingConfig.from_env(),
            search=SearchConfig.from_env(),
            claims=ClaimsConfig.from_env(),
            cache=CacheConfig.from_env(),
            workers=_env_int("BURGESS_WORKERS", cls.workers),
            log_level=os.getenv("BURGESS_LOG_LEVEL", cls.log_level).upper(),
        )
