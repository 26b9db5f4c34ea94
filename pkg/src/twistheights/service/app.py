"""FastAPI service wrapping the height engine.

Library exceptions surface as structured 422 responses carrying the error
class (curve/point/hypothesis/precision/input); clients map those to exit
codes.  All numeric payloads are deterministic for a fixed precision.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import bounds, curve, exactmath, families, localheights
from ..errors import TwistHeightsError
from . import schemas

app = FastAPI(
    title="twistheights",
    description="Canonical heights on quadratic twists of elliptic curves",
    version="0.1.0",
)


@app.exception_handler(TwistHeightsError)
async def library_error_handler(_: Request, exc: TwistHeightsError) -> JSONResponse:
    return JSONResponse(
        status_code=422,
        content=schemas.ErrorResponse(error_class=exc.error_class, message=str(exc)).model_dump(),
    )


@app.exception_handler(ValueError)
async def value_error_handler(_: Request, exc: ValueError) -> JSONResponse:
    return JSONResponse(
        status_code=422,
        content=schemas.ErrorResponse(error_class="input", message=str(exc)).model_dump(),
    )


def _model_from(coefficients: list[int]) -> curve.WeierstrassModel:
    if len(coefficients) == 5:
        return curve.make_model(*coefficients)
    if len(coefficients) == 3:
        return curve.make_short_model(*coefficients)
    raise ValueError("curve takes 5 coefficients [a1,a2,a3,a4,a6] or 3 short-form [a2,a4,a6]")


def _point_from(wire) -> curve.CurvePoint:
    return curve.CurvePoint.deserialize(wire)


def _family_from(req: schemas.FamilyMakeRequest) -> families.TwistFamily:
    if req.seed is not None:
        if len(req.seed) != 2:
            raise ValueError("seed takes exactly [A, B]")
        return families.cubic_seed_family(*req.seed)
    if req.f is None or req.F is None:
        raise ValueError("provide either seed=[A,B] or both f and F coefficient lists")
    return families.construct_family(
        exactmath.IntPolynomial(req.f), exactmath.IntPolynomial(req.F)
    )


def _family_wire(family: families.TwistFamily) -> schemas.FamilyWire:
    data = family.serialize()
    return schemas.FamilyWire(
        **data, lower_bound_applicable=family.twist_bound_applicable()
    )


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": app.version}


@app.post("/curve/info", response_model=schemas.CurveInfoResponse)
def curve_info(req: schemas.CurveInfoRequest) -> schemas.CurveInfoResponse:
    model = _model_from(req.coefficients)
    factors = exactmath.factorize(model.disc, req.trial_bound)
    entries = [
        schemas.PrimeEntry(p=p, exponent=e, minimal=e < localheights.MAX_DISC_VALUATION)
        for p, e in factors.items()
    ]
    return schemas.CurveInfoResponse(
        coefficients=model.coefficients(),
        short_form=model.is_short,
        b2=model.b2,
        b4=model.b4,
        b6=model.b6,
        b8=model.b8,
        c4=model.c4,
        c6=model.c6,
        disc=model.disc,
        disc_factors=entries,
        sixth_power_free=all(e < 6 for _, e in factors.items()),
        minimal_everywhere=all(e < localheights.MAX_DISC_VALUATION for e in factors.values()),
    )


@app.post("/height", response_model=schemas.HeightResponse)
def height(req: schemas.HeightRequest) -> schemas.HeightResponse:
    model = _model_from(req.coefficients)
    pt = _point_from(req.point)
    hhat, breakdown = localheights.canonical_height(model, pt, req.precision)
    return schemas.HeightResponse(
        hhat=bounds.format_value(hhat, req.precision),
        error=bounds.format_value(exactmath.error_estimate(exactmath.context(req.precision)), req.precision),
        torsion=breakdown.torsion,
        archimedean=bounds.format_value(breakdown.archimedean, req.precision),
        method=breakdown.method,
        entries=[schemas.BreakdownEntryWire(**e.serialize()) for e in breakdown.entries],
        precision=req.precision,
    )


@app.post("/lower-bound", response_model=schemas.LowerBoundResponse)
def lower_bound_endpoint(req: schemas.LowerBoundRequest) -> schemas.LowerBoundResponse:
    model = _model_from(req.coefficients)
    if (req.d is None) == (req.d_sign is None):
        raise ValueError("provide exactly one of d or d_sign")
    d = req.d if req.d is not None else req.d_sign
    report = bounds.lower_bound(model, d, req.precision, req.trial_bound, req.strict)
    return schemas.LowerBoundResponse(**report.serialize())


@app.post("/family/make", response_model=schemas.FamilyWire)
def family_make(req: schemas.FamilyMakeRequest) -> schemas.FamilyWire:
    return _family_wire(_family_from(req))


@app.post("/family/instantiate", response_model=schemas.InstanceWire)
def family_instantiate(req: schemas.FamilyInstantiateRequest) -> schemas.InstanceWire:
    family = _family_from(req)
    inst = families.instantiate(family, req.t, req.trial_bound)
    return schemas.InstanceWire(**inst.serialize())


@app.post("/family/scan", response_model=schemas.ScanResponse)
def family_scan(req: schemas.FamilyScanRequest) -> schemas.ScanResponse:
    family = _family_from(req)
    records = families.scan(
        family, req.t_min, req.t_max, req.precision, req.trial_bound, req.strict
    )
    return schemas.ScanResponse(
        family=_family_wire(family),
        records=[schemas.ScanRecordWire(**r.serialize()) for r in records],
    )


@app.post("/primitivity", response_model=schemas.CertificateWire)
def primitivity(req: schemas.PrimitivityRequest) -> schemas.CertificateWire:
    model = _model_from(req.coefficients)
    pt = _point_from(req.point)
    cert = bounds.primitivity_check(
        model, req.d, pt, req.precision, req.trial_bound, req.strict
    )
    return schemas.CertificateWire(**cert.serialize())


@app.post("/threshold-scan", response_model=schemas.ThresholdScanResponse)
def threshold(req: schemas.ThresholdScanRequest) -> schemas.ThresholdScanResponse:
    report = bounds.threshold_scan(req.t_min, req.t_max, req.precision)
    return schemas.ThresholdScanResponse(**report.serialize())
