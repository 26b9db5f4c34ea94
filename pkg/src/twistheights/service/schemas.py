"""Pydantic request/response models for the height service.

Wire conventions: curves are 5-tuples [a1,a2,a3,a4,a6] (3-tuples mean the
short form [a2,a4,a6]); points are [alpha, beta, delta] or "O"; polynomial
coefficient lists are constant term first.  Transcendental values travel as
decimal strings with an explicit error field so payloads are replayable
byte-for-byte at a fixed precision.
"""

from __future__ import annotations

from typing import Any, Literal

from pydantic import BaseModel, Field

from ..exactmath import DEFAULT_PRECISION, DEFAULT_TRIAL_BOUND

Coefficients = list[int]
PointWire = list[int] | Literal["O"]


class PrecisionOptions(BaseModel):
    precision: int = Field(default=DEFAULT_PRECISION, ge=64, le=4096)
    trial_bound: int = Field(default=DEFAULT_TRIAL_BOUND, ge=2)
    strict: bool = False


class CurveInfoRequest(PrecisionOptions):
    coefficients: Coefficients


class PrimeEntry(BaseModel):
    p: int
    exponent: int
    minimal: bool


class CurveInfoResponse(BaseModel):
    coefficients: Coefficients
    short_form: bool
    b2: int
    b4: int
    b6: int
    b8: int
    c4: int
    c6: int
    disc: int
    disc_factors: list[PrimeEntry]
    sixth_power_free: bool
    minimal_everywhere: bool


class HeightRequest(PrecisionOptions):
    coefficients: Coefficients
    point: PointWire


class BreakdownEntryWire(BaseModel):
    place: int
    lambda_multiplier: list[int]
    value: str
    case: str
    A: int | None
    B: int | None
    C: int | None
    N: int


class HeightResponse(BaseModel):
    hhat: str
    error: str
    torsion: bool
    archimedean: str
    method: str
    entries: list[BreakdownEntryWire]
    precision: int


class LowerBoundRequest(PrecisionOptions):
    coefficients: Coefficients
    d: int | None = None
    d_sign: Literal["+", "-"] | None = None


class LowerBoundResponse(BaseModel):
    sign_d: int
    constant: str
    error: str
    q_abs: str
    omega: str
    disc_factors: dict[str, int]
    prime_sum_term: str
    two_term: str
    precision: int
    d: int | None
    square_free: str | None
    bound: str | None


class FamilyMakeRequest(PrecisionOptions):
    f: Coefficients | None = None
    F: Coefficients | None = None
    seed: list[int] | None = None  # [A, B]


class FamilyWire(BaseModel):
    f: Coefficients
    F: Coefficients
    f1: Coefficients
    D: Coefficients
    m: int
    lower_bound_applicable: bool


class FamilyInstantiateRequest(FamilyMakeRequest):
    t: int


class InstanceWire(BaseModel):
    t: int
    d: int
    square_free: str
    square_free_witness: int | None
    curve: Coefficients
    point: PointWire


class FamilyScanRequest(FamilyMakeRequest):
    t_min: int
    t_max: int


class ScanRecordWire(BaseModel):
    t: int
    status: str
    reason: str | None
    instance: InstanceWire | None
    certificate: dict[str, Any] | None


class ScanResponse(BaseModel):
    family: FamilyWire
    records: list[ScanRecordWire]


class PrimitivityRequest(PrecisionOptions):
    coefficients: Coefficients
    d: int
    point: PointWire


class CertificateWire(BaseModel):
    verdict: str
    hhat: str | None
    lower_bound: str | None
    m_max: int | None
    notes: str
    curve: Coefficients
    d: int
    point: PointWire
    precision: int
    trial_bound: int
    constant: str | None


class ThresholdScanRequest(PrecisionOptions):
    t_min: int
    t_max: int


class ThresholdScanResponse(BaseModel):
    t_min: int
    t_max: int
    positive_threshold: int | None
    negative_threshold: int | None
    combined_threshold: int | None
    constant: str
    precision: int


class ErrorResponse(BaseModel):
    error_class: str
    message: str
