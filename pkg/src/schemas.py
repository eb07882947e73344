"""
Pydantic models for every emitted JSON payload and for cache entries.

Payloads are validated through these models before they are written, and
``model_json_schema()`` documents the output formats.
"""

from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field


class _Payload(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)


class ElementsPayload(_Payload):
    """idempotents / units listing."""
    ring_spec: str
    order: int
    count: int
    elements: List[Any]


class PrimeRecord(_Payload):
    id: int
    generators: List[Any]
    index: int = Field(ge=1)
    size: int


class PrimesPayload(_Payload):
    ring_spec: str
    primes: List[PrimeRecord]


class OrbitRecord(_Payload):
    prime_ids: List[int]
    stabilizer_size: int
    size: int


class OrbitsPayload(_Payload):
    ring_spec: str
    psi: str
    psi_order: int
    orbits: List[OrbitRecord]


class TFunctionPayload(_Payload):
    """T(m;h) with its maximizing profile; optional fields only when requested."""
    value: int
    profile: List[int]
    bruteforce: Optional[int] = None
    strictly_positive: Optional[int] = None


class ConstantPayload(_Payload):
    """Shared fields of the davenport and burgess payloads."""
    ring_spec: str
    psi: str
    psi_order: int
    witness: List[Any]
    complete: bool
    nodes: int


class DavenportPayload(ConstantPayload):
    D: int


class BurgessPayload(ConstantPayload):
    I: int


class ClaimRecord(_Payload):
    passed: bool
    exhaustive: bool
    checked: int
    counterexample: Optional[Dict[str, Any]] = None
    note: Optional[str] = None


class WitnessPayload(_Payload):
    ring_spec: str
    psi: str
    witness: List[Any]
    length: int
    bound: int
    davenport: int
    sigma_term: int
    blocks: List[Dict[str, Any]]
    unit_sequence: List[Any]
    complete: bool
    claims: Dict[str, ClaimRecord] = Field(default_factory=dict)


class VerifyPayload(_Payload):
    ring_spec: str
    psi: str
    burgess: Optional[int]
    bound: int
    davenport: int
    sigma_term: int
    holds: Optional[bool]
    equality: Optional[bool]
    predicted_equality: bool
    prediction_source: Optional[str]
    prediction_holds: Optional[bool]
    complete: bool
    violation: bool
    theorem_d_bound: Optional[int]
    burgess_witness: Optional[List[Any]]
    witness: List[Any]
    claims: Dict[str, ClaimRecord]


class SweepRow(_Payload):
    """One (ring, psi) instance of a sweep."""
    ring: str
    psi: str
    D_psi: Optional[int]
    sigma_term: Optional[int]
    I_psi: Optional[int]
    bound: Optional[int]
    equality: Optional[bool]
    runtime_ms: Optional[float] = None
    complete: bool
    predicted_equality: Optional[bool] = None
    violation: bool = False
    claims_failed: Optional[List[str]] = None
    error: Optional[str] = None


# CSV column order for sweep tables
SWEEP_COLUMNS = ["ring", "psi", "D_psi", "sigma_term", "I_psi", "bound", "equality", "runtime_ms", "complete"]


class ResultCacheEntry(_Payload):
    key: str
    computation: str
    engine_version: str
    value: Dict[str, Any]
    timestamp: float
