"""FastAPI service wrapping the exact-entropy core.

One POST endpoint per command; request/response bodies are the pydantic
models from :mod:`padic_entropy.schemas`.  Errors map to structured bodies:
parse -> 400, validation -> 422, non-stabilization -> 409.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from . import __version__, dispatch
from .errors import ParseError, StabilizationError, ValidationError
from .schemas import (
    CheckATRequest,
    ClassifyRequest,
    EntropyRequest,
    HeisenbergRequest,
    NewtonRequest,
    OracleRequest,
    Report,
    ScaleRequest,
)

app = FastAPI(
    title="padic-entropy",
    version=__version__,
    description=(
        "Exact topological entropy and Willis scale of endomorphisms of "
        "finite-rank locally compact abelian p-groups, with independent "
        "brute-force oracles"
    ),
)

_STATUS = {"parse": 400, "validation": 422, "non_stabilization": 409}


def _error_response(kind: str, message: str, **extra):
    detail = {"kind": kind, "message": message, **extra}
    return JSONResponse(status_code=_STATUS.get(kind, 500), content={"detail": detail})


@app.exception_handler(ParseError)
async def _parse_error(_: Request, exc: ParseError):
    return _error_response("parse", str(exc))


@app.exception_handler(ValidationError)
async def _validation_error(_: Request, exc: ValidationError):
    return _error_response("validation", str(exc), violations=exc.violations)


@app.exception_handler(StabilizationError)
async def _stabilization_error(_: Request, exc: StabilizationError):
    diagnostics = exc.diagnostics.to_json() if exc.diagnostics else None
    return _error_response("non_stabilization", str(exc), diagnostics=diagnostics)


@app.exception_handler(RequestValidationError)
async def _request_validation_error(_: Request, exc: RequestValidationError):
    return _error_response("parse", str(exc))


@app.get("/v1/health")
def health():
    return {"status": "ok", "version": __version__}


@app.post("/v1/entropy", response_model=Report)
def entropy(request: EntropyRequest):
    return dispatch.run_entropy(request)


@app.post("/v1/scale", response_model=Report)
def scale(request: ScaleRequest):
    return dispatch.run_scale(request)


@app.post("/v1/newton", response_model=Report)
def newton(request: NewtonRequest):
    return dispatch.run_newton(request)


@app.post("/v1/oracle", response_model=Report)
def oracle(request: OracleRequest):
    return dispatch.run_oracle(request)


@app.post("/v1/check-at", response_model=Report)
def check_at(request: CheckATRequest):
    return dispatch.run_check_at(request)


@app.post("/v1/classify", response_model=Report)
def classify(request: ClassifyRequest):
    return dispatch.run_classify(request)


@app.post("/v1/heisenberg", response_model=Report)
def heisenberg(request: HeisenbergRequest):
    return dispatch.run_heisenberg(request)


if __name__ == "__main__":
    import uvicorn

    uvicorn.run("padic_entropy.service:app", host="127.0.0.1", port=8000)
