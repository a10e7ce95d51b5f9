"""HTTP front end wrapping the core package.

Every computation the CLI exposes is available as a JSON endpoint, so the
toolkit can serve multiple clients (or a notebook) from one process.  All
handlers are pure functions of the request body; fixed seeds give
byte-identical CSV payloads across calls.
"""

from __future__ import annotations

from typing import Literal

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field, field_validator

from . import ergolab, fockcore, qops
from .errors import (
    BoundViolationError,
    ConditioningError,
    DomainError,
    ExprSyntaxError,
    QFockError,
    SizeError,
    WindowOverflowError,
)
from .parser import canonical_str, parse_expr, to_wick
from .wickalg import WickMonomial, vacuum_expectation

app = FastAPI(title="qfock", description="q-deformed Fock space toolkit")


# -- request / response models ----------------------------------------------


class ExpectRequest(BaseModel):
    expr: str
    q: float = Field(0.0, gt=-1.0, lt=1.0)


class ExpectResponse(BaseModel):
    poly: str
    value: float
    canonical_expr: str


class NormRequest(BaseModel):
    expr: str
    q: float = Field(0.0, gt=-1.0, lt=1.0)
    window: tuple[int, int] = (0, 2)
    max_level: int = Field(3, ge=1)


class NormResponse(BaseModel):
    value: float
    method: Literal["exact-eigen", "power-iteration"]
    residual: float
    levels_used: int


class MixingRequest(BaseModel):
    expr: str
    q: float = Field(0.0, gt=-1.0, lt=1.0)
    nmax: int = Field(16, ge=1)
    seq_kind: Literal["arith", "random"] = "arith"
    seed: int = 0
    max_level: int | None = None


class DecayRowModel(BaseModel):
    word: str
    q: float
    seq_kind: str
    seed: int
    n: int
    i: int
    j: int
    norm: float
    cesaro: float
    bound: float
    margin: float


class MixingResponse(BaseModel):
    ok: bool
    csv: str
    rows: list[DecayRowModel]


class GramRequest(BaseModel):
    window: tuple[int, int] = (0, 1)
    max_level: int = Field(2, ge=0)


class GramBlockModel(BaseModel):
    block: dict
    matrix: list[list[str]]


class GramResponse(BaseModel):
    blocks: list[GramBlockModel]


class VerifyRequest(BaseModel):
    corrupt_gram: bool = False
    symmetry_samples: int = Field(200, ge=0)
    confluence_samples: int = Field(200, ge=0)


class SuiteResult(BaseModel):
    name: str
    ok: bool
    checks: int
    failures: int
    detail: str


class VerifyResponse(BaseModel):
    ok: bool
    suites: list[SuiteResult]


# -- error mapping ----------------------------------------------------------


def _bad_request(exc: QFockError) -> HTTPException:
    return HTTPException(status_code=400, detail=f"{type(exc).__name__}: {exc}")


_CLIENT_ERRORS = (
    DomainError,
    SizeError,
    ExprSyntaxError,
    WindowOverflowError,
    ConditioningError,
)


# -- endpoints --------------------------------------------------------------


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.post("/expect", response_model=ExpectResponse)
def expect(req: ExpectRequest) -> ExpectResponse:
    try:
        ast = parse_expr(req.expr)
        poly = vacuum_expectation(to_wick(ast))
    except _CLIENT_ERRORS as exc:
        raise _bad_request(exc)
    return ExpectResponse(poly=str(poly), value=poly(req.q), canonical_expr=canonical_str(ast))


@app.post("/norm", response_model=NormResponse)
def norm(req: NormRequest) -> NormResponse:
    try:
        expr = to_wick(parse_expr(req.expr))
        fock = fockcore.TruncatedFock(req.window, req.max_level)
        op = qops.matrix_of_expr(expr, fock, req.q)
        report = qops.op_norm_q(op, req.q)
    except _CLIENT_ERRORS as exc:
        raise _bad_request(exc)
    return NormResponse(
        value=report.value,
        method=report.method,
        residual=report.residual,
        levels_used=report.levels_used,
    )


def _as_monomial(expr_src: str) -> WickMonomial:
    expr = to_wick(parse_expr(expr_src))
    if len(expr.terms) != 1:
        raise DomainError("mixing requires a single normal-ordered monomial")
    (creators, annihilators), coeff = next(iter(expr.terms.items()))
    if coeff != coeff.one():
        raise DomainError("mixing monomial must have coefficient 1")
    return WickMonomial(creators, annihilators)


@app.post("/mixing", response_model=MixingResponse)
def mixing(req: MixingRequest) -> MixingResponse:
    try:
        word = _as_monomial(req.expr)
        rows = ergolab.cesaro_decay(
            word, req.q, req.nmax, seq_kind=req.seq_kind, seed=req.seed, max_level=req.max_level
        )
        ok = True
    except BoundViolationError:
        return MixingResponse(ok=False, csv="", rows=[])
    except _CLIENT_ERRORS as exc:
        raise _bad_request(exc)
    return MixingResponse(
        ok=ok,
        csv=ergolab.rows_to_csv(rows),
        rows=[
            DecayRowModel(
                word=r.word_id,
                q=r.q,
                seq_kind=r.seq_kind,
                seed=r.seed,
                n=r.n,
                i=r.i,
                j=r.j,
                norm=r.norm,
                cesaro=r.cesaro,
                bound=r.bound,
                margin=r.margin,
            )
            for r in rows
        ],
    )


@app.post("/gram", response_model=GramResponse)
def gram(req: GramRequest) -> GramResponse:
    try:
        fock = fockcore.TruncatedFock(req.window, req.max_level)
        blocks = fock.gram_blocks()
    except _CLIENT_ERRORS as exc:
        raise _bad_request(exc)
    return GramResponse(blocks=[GramBlockModel(**b.to_json_dict()) for b in blocks])


@app.post("/verify", response_model=VerifyResponse)
def verify(req: VerifyRequest) -> VerifyResponse:
    reports = ergolab.verify_all(
        corrupt_gram=req.corrupt_gram,
        symmetry_samples=req.symmetry_samples,
        confluence_samples=req.confluence_samples,
    )
    suites = [
        SuiteResult(name=r.name, ok=r.ok, checks=r.checks, failures=r.failures, detail=r.detail)
        for r in reports
    ]
    return VerifyResponse(ok=all(s.ok for s in suites), suites=suites)
