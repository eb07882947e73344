"""
Sweeps over families of (ring, weight group) instances.

A family is a YAML file:

    rings: ["Z/4", "Z/2 x Z/2", "GF(4)"]   # or max_order: 64 for every supported ring
    psi: ["id", "full", "cyclic"]          # "cyclic" expands to every cyclic subgroup of Aut(R)
    instances:                              # optional explicit pairs
      - {ring: "Z/4 x Z/4", psi: "swap(0,1)"}

Each instance yields one row comparing I_Psi(R) with the lower bound
D_Psi(U(R)) + sigma term, recording equality or strict inequality.
"""
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import yaml
from rich.console import Console
from rich.progress import BarColumn, MofNCompleteColumn, Progress, TextColumn, TimeElapsedColumn

from automorphism import cyclic_subgroups, full_aut, generate_weight_group, parse_psi
from cache import ResultCache
from config import AppConfig
from exceptions import BurgessLabError, ConfigurationError
from ring_spec import canonical_ring_spec, enumerate_rings, parse_ring
from schemas import SweepRow
from witness_builder import LemmaContext, build_witness, verify_claims, verify_theorem

logger = logging.getLogger(__name__)

DEFAULT_PSI = ("id", "full", "cyclic")
DEFAULT_MAX_ORDER = 64


@dataclass(frozen=True)
class SweepInstance:
    ring: str
    psi: str


@dataclass
class SweepFamily:
    """Ring specs crossed with weight descriptors, plus explicit instances."""
    rings: List[str] = field(default_factory=list)
    psi: List[str] = field(default_factory=lambda: list(DEFAULT_PSI))
    instances: List[SweepInstance] = field(default_factory=list)

    @classmethod
    def default(cls, max_order: int = DEFAULT_MAX_ORDER) -> "SweepFamily":
        """Every supported ring of order <= max_order with Psi in {id, full, cyclic subgroups}."""
        return cls(rings=enumerate_rings(max_order))

    @classmethod
    def from_yaml(cls, path: Path, max_order: Optional[int] = None) -> "SweepFamily":
        """
        Load a family file.

        Args:
            path: YAML file
            max_order: overrides the file's ``max_order``

        Raises:
            ConfigurationError: if the file is unreadable or malformed
        """
        try:
            data = yaml.safe_load(Path(path).read_text(encoding="utf-8")) or {}
        except (OSError, yaml.YAMLError) as exc:
            raise ConfigurationError(f"cannot read sweep family {path}: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigurationError(f"{path}: a sweep family is a mapping")

        rings = data.get("rings") or []
        order_cap = max_order if max_order is not None else data.get("max_order")
        if order_cap is not None:
            if not isinstance(order_cap, int) or order_cap < 2:
                raise ConfigurationError(f"{path}: max_order must be an integer >= 2")
            rings = list(rings) + enumerate_rings(order_cap)
        psi = data.get("psi", list(DEFAULT_PSI))
        if not isinstance(rings, list) or not isinstance(psi, list):
            raise ConfigurationError(f"{path}: 'rings' and 'psi' must be lists")

        instances = []
        for item in data.get("instances") or []:
            if not isinstance(item, dict) or "ring" not in item or "psi" not in item:
                raise ConfigurationError(f"{path}: every instance needs 'ring' and 'psi'")
            instances.append(SweepInstance(str(item["ring"]), str(item["psi"])))
        return cls(rings=[str(r) for r in rings], psi=[str(p) for p in psi], instances=instances)

    def expand(self) -> List[SweepInstance]:
        """
        Concrete instances in family order. Descriptors naming the same
        subgroup of one ring are kept once (first spelling wins); rings whose
        automorphisms cannot be assembled keep their descriptors so the
        failure is reported in the row.
        """
        result: List[SweepInstance] = []
        seen_rings = set()
        for spec in self.rings:
            try:
                canonical = canonical_ring_spec(spec)
            except BurgessLabError as exc:
                logger.warning("ring %r does not parse: %s", spec, exc)
                result.append(SweepInstance(spec, "id"))
                continue
            if canonical in seen_rings:
                continue
            seen_rings.add(canonical)
            result.extend(SweepInstance(canonical, d) for d in expand_descriptors(canonical, self.psi))
        result.extend(self.instances)
        return result


def expand_descriptors(spec: str, descriptors: Sequence[str]) -> List[str]:
    """Resolve ``cyclic`` and drop descriptors that name an already listed subgroup."""
    try:
        ring = parse_ring(spec)
    except BurgessLabError:
        return [d for d in descriptors if d != "cyclic"] or ["id"]
    expanded: List[str] = []
    fingerprints = set()

    def keep(descriptor: str, fingerprint: Optional[str]) -> None:
        if fingerprint is None:
            expanded.append(descriptor)
        elif fingerprint not in fingerprints:
            fingerprints.add(fingerprint)
            expanded.append(descriptor)

    for descriptor in descriptors:
        try:
            if descriptor == "cyclic":
                for subgroup in cyclic_subgroups(full_aut(ring)):
                    keep(subgroup.descriptor, subgroup.fingerprint)
            elif descriptor == "id":
                keep(descriptor, generate_weight_group(ring, []).fingerprint)
            else:
                keep(descriptor, parse_psi(ring, descriptor).fingerprint)
        except BurgessLabError as exc:
            logger.warning("%s: descriptor %r kept unresolved: %s", spec, descriptor, exc)
            keep(descriptor, None)
    return expanded


def _error_row(instance: SweepInstance, error: str) -> SweepRow:
    return SweepRow(
        ring=instance.ring,
        psi=instance.psi,
        D_psi=None,
        sigma_term=None,
        I_psi=None,
        bound=None,
        equality=None,
        complete=False,
        error=error,
    )


def compute_row(instance: SweepInstance, config: AppConfig, claims: bool = False) -> SweepRow:
    """Build the witness, run the exhaustive search when the ring is small enough, compare."""
    ring = parse_ring(instance.ring, config.ring.max_order)
    group = parse_psi(ring, instance.psi)
    context = LemmaContext(ring, group)
    report = build_witness(ring, group, config, context)
    theorem = verify_theorem(
        ring,
        group,
        config,
        report,
        context,
        compute_burgess=ring.order <= config.search.max_order,
    )
    failed = None
    if claims:
        verdicts = verify_claims(ring, group, report, context, config)
        failed = sorted(name for name, verdict in verdicts.items() if not verdict.passed)
    return SweepRow(
        ring=ring.label,
        psi=group.descriptor,
        D_psi=theorem.davenport,
        sigma_term=theorem.sigma_term,
        I_psi=theorem.lhs,
        bound=theorem.rhs,
        equality=theorem.equality,
        complete=theorem.complete,
        predicted_equality=theorem.predicted_equality,
        violation=theorem.violation,
        claims_failed=failed,
    )


def run_instance(
    instance: SweepInstance, timing: bool = False, claims: bool = False, use_cache: bool = True
) -> Dict[str, Any]:
    """
    One sweep row as a JSON-ready dict. Runs in worker processes, so errors
    are folded into the row instead of raised.
    """
    started = time.perf_counter()
    config = AppConfig.from_env()
    # timed rows are always recomputed
    cache = ResultCache.from_config(config.cache, enabled=config.cache.enabled and use_cache and not timing)
    key = cache.make_key("sweep_row", ring=instance.ring, psi=instance.psi, claims=claims)
    cached_row = cache.get(key)
    if cached_row is not None:
        return cached_row
    try:
        row = compute_row(instance, config, claims)
    except BurgessLabError as exc:
        logger.warning("%s, psi=%s: %s", instance.ring, instance.psi, exc)
        row = _error_row(instance, str(exc))
    payload = row.model_dump(mode="json")
    if row.complete and row.error is None:
        cache.set(key, payload, computation="sweep_row")
    if timing:
        payload["runtime_ms"] = round((time.perf_counter() - started) * 1000.0, 3)
    return payload


def _progress(enabled: bool) -> Progress:
    return Progress(
        TextColumn("[cyan]sweep[/cyan]"),
        BarColumn(),
        MofNCompleteColumn(),
        TimeElapsedColumn(),
        TextColumn("{task.description}"),
        console=Console(stderr=True),
        disable=not enabled,
        transient=True,
    )


def run_sweep(
    instances: Sequence[SweepInstance],
    workers: int = 1,
    timing: bool = False,
    claims: bool = False,
    use_cache: bool = True,
    show_progress: Optional[bool] = None,
) -> List[SweepRow]:
    """
    Evaluate every instance, in a process pool when ``workers > 1``.

    Rows come back in instance order regardless of completion order.
    """
    if show_progress is None:
        show_progress = sys.stderr.isatty()
    rows: List[Optional[Dict[str, Any]]] = [None] * len(instances)
    with _progress(show_progress) as progress:
        task = progress.add_task("", total=len(instances))
        if workers <= 1:
            for position, instance in enumerate(instances):
                progress.update(task, description=f"{instance.ring} / {instance.psi}")
                rows[position] = run_instance(instance, timing, claims, use_cache)
                progress.advance(task)
        else:
            with ProcessPoolExecutor(max_workers=workers) as executor:
                futures = {
                    executor.submit(run_instance, instance, timing, claims, use_cache): position
                    for position, instance in enumerate(instances)
                }
                for future in as_completed(futures):
                    position = futures[future]
                    rows[position] = future.result()
                    progress.update(task, description=f"{instances[position].ring} / {instances[position].psi}")
                    progress.advance(task)
    result = [SweepRow.model_validate(row) for row in rows]
    logger.info("sweep summary: %s", summarize(result))
    return result


def summarize(rows: Sequence[SweepRow]) -> Dict[str, int]:
    """Counts of equalities, strict inequalities, violations, incomplete and failed rows."""
    return {
        "instances": len(rows),
        "equality": sum(1 for r in rows if r.equality is True),
        "strict": sum(1 for r in rows if r.equality is False and not r.violation),
        "violations": sum(1 for r in rows if r.violation),
        "incomplete": sum(1 for r in rows if not r.complete and r.error is None),
        "errors": sum(1 for r in rows if r.error is not None),
        "claim_failures": sum(1 for r in rows if r.claims_failed),
    }

