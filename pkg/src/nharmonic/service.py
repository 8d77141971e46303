"""HTTP service exposing the library as a small JSON API.

Each endpoint mirrors one CLI verb and returns the same report structure.
Non-finite floats serialize as the strings "inf" / "-inf" / "nan", matching
the CLI convention.  Run with::

    uvicorn nharmonic.service:app
"""

from __future__ import annotations

from typing import Literal

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, ConfigDict, Field

from . import reports
from .errors import DomainError, NumericalError
from .functionals import Functional
from .geometry import Annulus

FiniteOrInf = float | str


class AnnulusIn(BaseModel):
    inner: float = Field(gt=0)
    outer: float = Field(gt=0)

    def to_annulus(self) -> Annulus:
        return Annulus(self.inner, self.outer)


class PairRequest(BaseModel):
    dimension: int = Field(ge=2)
    source: AnnulusIn
    target: AnnulusIn


class MinimizeRequest(PairRequest):
    rtol: float = Field(default=1e-9, gt=0)
    atol: float = Field(default=1e-10, gt=0)


class EnergyRequest(PairRequest):
    map: Literal["minimizer", "fit", "power"] = "minimizer"
    functional: Literal["conformal", "weighted", "operator-norm"] = "conformal"
    rtol: float = Field(default=1e-9, gt=0)
    atol: float = Field(default=1e-10, gt=0)


class ProfileRequest(BaseModel):
    dimension: int = Field(ge=2)
    kind: Literal["plus", "minus", "identity", "inversion", "minimizer"]
    start: float = Field(gt=0)
    stop: float = Field(gt=0)
    steps: int = Field(ge=1)
    source: AnnulusIn | None = None
    target: AnnulusIn | None = None


class NitscheTableRequest(BaseModel):
    dimension: int = Field(ge=2)
    moduli: list[float] | None = None


class CounterexampleRequest(PairRequest):
    functional: Literal["conformal", "weighted"] = "conformal"


class QcRequest(PairRequest):
    k_outer: float = Field(ge=1)
    k_inner: float = Field(ge=1)


class ReportModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    schema_version: int = Field(alias="schema")
    verb: str
    dimension: int


class AnnulusOut(BaseModel):
    inner: float
    outer: float


class ModulusOut(BaseModel):
    value: FiniteOrInf
    log_ratio: FiniteOrInf


class ModuliOut(BaseModel):
    source: ModulusOut
    image: ModulusOut


class EnergyOut(BaseModel):
    value: float
    functional: str
    formula_id: str
    quad_error: float
    moduli: ModuliOut


class MapOut(BaseModel):
    type: str
    kind: str | None = None
    lam: float | None = Field(default=None, alias="lambda")
    k: float | None = None
    domain: AnnulusOut | None = None
    hammer_to: float | None = None
    hammer_zone: AnnulusOut | None = None
    scale: float | None = None
    inverted: bool | None = None

    model_config = ConfigDict(populate_by_name=True)


class PlanarOut(BaseModel):
    omega: float
    rescale: float


class WitnessOut(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    functional: str
    lam: float = Field(alias="lambda")
    witness_energy: float
    radial_infimum: float
    gap: float
    conclusive: bool


class ClassifyResponse(ReportModel):
    source: AnnulusOut
    target: AnnulusOut
    regime: str
    alpha_ratio: float
    mod_source: ModulusOut
    mod_target: ModulusOut
    lower_bound: FiniteOrInf
    upper_bound: FiniteOrInf


class MinimizeResponse(ReportModel):
    source: AnnulusOut
    target: AnnulusOut
    regime: str
    status: str
    map: MapOut
    planar: PlanarOut | None = None
    energy: EnergyOut
    witness: WitnessOut | None = None


class EnergyResponse(ReportModel):
    source: AnnulusOut
    target: AnnulusOut
    map_name: str
    map: MapOut
    energy: EnergyOut


class ProfileRow(BaseModel):
    t: float
    H: float
    Hdot: float
    eta: FiniteOrInf
    characteristic_residual: float


class ProfileResponse(ReportModel):
    kind: str
    rows: list[ProfileRow]


class NitscheRow(BaseModel):
    mod: float
    lower: float
    upper: FiniteOrInf


class NitscheTableResponse(ReportModel):
    alpha_n: FiniteOrInf
    gamma_n: float
    delta_n: float | None = None
    rows: list[NitscheRow]


class IdentityResiduals(BaseModel):
    jacobian_volume: float
    target_modulus: float
    source_modulus: float


class EstimateMargins(BaseModel):
    normal_tangential: float
    normal: float
    tangential: float


class DistortionResiduals(BaseModel):
    conformal_identity: float
    weighted_identity: float


class VerifyResponse(ReportModel):
    source: AnnulusOut
    target: AnnulusOut
    map: MapOut
    identities: IdentityResiduals
    estimate_margins: EstimateMargins
    distortion_residuals: DistortionResiduals


class CounterexampleResponse(ReportModel):
    source: AnnulusOut
    target: AnnulusOut
    witness: WitnessOut


class DilatationsOut(BaseModel):
    k_outer: float
    k_inner: float


class QcResponse(ReportModel):
    source: AnnulusOut
    target: AnnulusOut
    k_outer: float
    k_inner: float
    ratio_power: float
    lower_ok: bool
    upper_ok: bool
    lower_margin: float
    upper_margin: float
    power_stretching_dilatations: DilatationsOut


class HealthResponse(BaseModel):
    status: str


app = FastAPI(
    title="nharmonic",
    description="Energy-minimal n-harmonic deformations between spherical annuli.",
)


@app.exception_handler(DomainError)
async def _domain_error(request: Request, exc: DomainError):
    return JSONResponse(
        status_code=400,
        content={"schema": 1, "error": {"type": "domain", "message": str(exc)}},
    )


@app.exception_handler(NumericalError)
async def _numerical_error(request: Request, exc: NumericalError):
    return JSONResponse(
        status_code=500,
        content={"schema": 1, "error": {"type": "numerical", "message": str(exc)}},
    )


@app.get("/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(status="ok")


@app.post("/classify", response_model=ClassifyResponse)
def classify(req: PairRequest):
    out = reports.classify_report(
        req.dimension, req.source.to_annulus(), req.target.to_annulus()
    )
    return ClassifyResponse.model_validate(reports.jsonable(out))


@app.post("/minimize", response_model=MinimizeResponse)
def minimize(req: MinimizeRequest):
    out = reports.minimize_report(
        req.dimension,
        req.source.to_annulus(),
        req.target.to_annulus(),
        rtol=req.rtol,
        atol=req.atol,
    )
    return MinimizeResponse.model_validate(reports.jsonable(out))


@app.post("/energy", response_model=EnergyResponse)
def energy(req: EnergyRequest):
    out = reports.energy_verb_report(
        req.dimension,
        req.source.to_annulus(),
        req.target.to_annulus(),
        req.map,
        Functional(req.functional),
        rtol=req.rtol,
        atol=req.atol,
    )
    return EnergyResponse.model_validate(reports.jsonable(out))


@app.post("/profile", response_model=ProfileResponse)
def profile(req: ProfileRequest):
    out = reports.profile_report(
        req.dimension,
        req.kind,
        req.start,
        req.stop,
        req.steps,
        req.source.to_annulus() if req.source else None,
        req.target.to_annulus() if req.target else None,
    )
    return ProfileResponse.model_validate(reports.jsonable(out))


@app.post("/nitsche-table", response_model=NitscheTableResponse)
def nitsche_table(req: NitscheTableRequest):
    out = reports.nitsche_table_report(req.dimension, req.moduli)
    return NitscheTableResponse.model_validate(reports.jsonable(out))


@app.post("/verify", response_model=VerifyResponse)
def verify(req: PairRequest):
    out = reports.verify_report(
        req.dimension, req.source.to_annulus(), req.target.to_annulus()
    )
    return VerifyResponse.model_validate(reports.jsonable(out))


@app.post("/counterexample", response_model=CounterexampleResponse)
def counterexample(req: CounterexampleRequest):
    out = reports.counterexample_report(
        req.dimension,
        req.source.to_annulus(),
        req.target.to_annulus(),
        Functional(req.functional),
    )
    return CounterexampleResponse.model_validate(reports.jsonable(out))


@app.post("/qc", response_model=QcResponse)
def qc(req: QcRequest):
    out = reports.qc_report(
        req.dimension,
        req.source.to_annulus(),
        req.target.to_annulus(),
        req.k_outer,
        req.k_inner,
    )
    return QcResponse.model_validate(reports.jsonable(out))
