"""Pydantic request/response models: the wire format of the service and CLI.

Rationals travel as strings ('num/den') or JSON integers; floats are rejected
by the models so exactness survives the trip.  Group and endomorphism
documents are kept as loose objects here and parsed by the core types, which
own the detailed validation rules.
"""

from __future__ import annotations

from typing import Literal, Optional, Union

from pydantic import BaseModel, ConfigDict

RationalLike = Union[str, int]
MatrixDoc = list[list[RationalLike]]


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class OracleOptions(StrictModel):
    window: int = 5
    cap: int = 40


class EntropyRequest(OracleOptions):
    """Entropy of a matrix on Q_p^n, of a block endomorphism, or of a per-prime family.

    Exactly one of ``matrix`` (with ``p``), ``group`` + ``endo``, or
    ``components`` + ``endo`` must be given.
    """

    matrix: Optional[MatrixDoc] = None
    p: Optional[int] = None
    group: Optional[dict] = None
    components: Optional[dict[str, dict]] = None
    endo: Optional[dict] = None


class OracleRequest(OracleOptions):
    matrix: MatrixDoc
    p: int


class ScaleRequest(OracleOptions):
    matrix: MatrixDoc
    p: int
    search_range: Optional[tuple[int, int]] = None


class NewtonRequest(StrictModel):
    poly: str
    p: int


class CheckATRequest(OracleOptions):
    a1: MatrixDoc
    b: MatrixDoc
    a2: MatrixDoc
    p: int


class ClassifyRequest(StrictModel):
    group: Optional[dict] = None
    components: Optional[dict[str, dict]] = None


class HeisenbergRequest(OracleOptions):
    ring: Literal["zp", "qp"]
    p: int
    s: Optional[RationalLike] = None
    t: Optional[RationalLike] = None
    oracle: bool = False
    classify: bool = False
    sample_size: int = 12
    seed: int = 0


class Report(BaseModel):
    """Response envelope: exact results plus provenance for every number."""

    command: str
    status: Literal["ok"] = "ok"
    results: dict
    provenance: dict[str, str]


class ErrorDetail(BaseModel):
    kind: Literal["parse", "validation", "non_stabilization", "error"]
    message: str
    violations: list[str] = []
    diagnostics: Optional[dict] = None


REQUEST_MODELS = {
    "entropy": EntropyRequest,
    "scale": ScaleRequest,
    "newton": NewtonRequest,
    "oracle": OracleRequest,
    "check-at": CheckATRequest,
    "classify": ClassifyRequest,
    "heisenberg": HeisenbergRequest,
}
