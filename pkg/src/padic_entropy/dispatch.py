"""Request dispatch shared by the FastAPI service and the CLI.

Every report carries both computation paths when both exist (closed formula
and limit oracle) together with an agreement flag, and a provenance string for
each numeric field naming the formula that produced it.
"""

from __future__ import annotations

import pydantic

from .engine import (
    check_addition_theorem,
    htop_oracle,
    min_scale_search,
    moeller_scale_oracle,
)
from .errors import ParseError, ValidationError
from .groups import BlockEndomorphism, FiniteRankPGroup
from .heisenberg import (
    DiagonalEndo,
    classify_heisenberg,
    entropy_diagonal,
    entropy_oracle_diagonal,
)
from .linalg import Matrix
from .newton import (
    newton_polygon,
    parse_monic_polynomial,
    polynomial_entropy_exponent,
    root_valuations,
    yuzvinski_entropy,
    yuzvinski_scale,
)
from .padic import EntropyValue, ensure_prime, format_rational, parse_rational
from .periodic import PeriodicEndomorphism, PeriodicGroup
from .schemas import (
    REQUEST_MODELS,
    CheckATRequest,
    ClassifyRequest,
    EntropyRequest,
    HeisenbergRequest,
    NewtonRequest,
    OracleRequest,
    ScaleRequest,
)

YUZVINSKI = "p-adic Yuzvinski formula via Newton polygon"
ORACLE = "cotrajectory index-growth oracle"
MOELLER = "Moeller scale limit formula"
REDUCTION = "divisible-quotient reduction + p-adic Yuzvinski formula"
QUOTIENT_ORACLE = "cotrajectory oracle on the torsion-free quotient"
PRIME_SUM = "entropy sum over the prime components"
SPLITTING = "center/quotient entropy splitting"
BOX_ORACLE = "congruence-box cotrajectory oracle"
MIN_SEARCH = "minimizing search over diagonal p-power lattices"
CLASSIFICATION = "finite-rank classification: E0 iff there is no Q_p factor"


def _square_matrix(doc, p) -> tuple[Matrix, int]:
    matrix = Matrix.from_json(doc)
    if not matrix.is_square:
        raise ValidationError(
            f"matrix must be square, got {matrix.nrows}x{matrix.ncols}"
        )
    return matrix, ensure_prime(p)


def run_entropy(req: EntropyRequest) -> dict:
    given = [name for name in ("matrix", "group", "components") if getattr(req, name) is not None]
    if len(given) != 1:
        raise ParseError(
            "entropy payload must contain exactly one of 'matrix'+'p', "
            "'group'+'endo', or 'components'+'endo'"
        )
    if req.matrix is not None:
        if req.p is None:
            raise ParseError("matrix entropy needs the prime 'p'")
        matrix, p = _square_matrix(req.matrix, req.p)
        formula = yuzvinski_entropy(matrix, p)
        oracle, diagnostics = htop_oracle(matrix, p, req.window, req.cap)
        return {
            "command": "entropy",
            "status": "ok",
            "results": {
                "p": p,
                "entropy": formula.to_json(),
                "entropy_oracle": oracle.to_json(),
                "agreement": formula == oracle,
                "diagnostics": diagnostics.to_json(),
            },
            "provenance": {"entropy": YUZVINSKI, "entropy_oracle": ORACLE},
        }
    if req.group is not None:
        if req.endo is None:
            raise ParseError("group entropy needs the endomorphism blocks 'endo'")
        group = FiniteRankPGroup.from_json(req.group)
        endo = BlockEndomorphism.from_json(group, req.endo)
        endo.ensure_valid()
        formula = endo.entropy()
        oracle, diagnostics = htop_oracle(
            endo.torsion_free_quotient_matrix(), group.p, req.window, req.cap
        )
        return {
            "command": "entropy",
            "status": "ok",
            "results": {
                "group": group.to_json(),
                "entropy": formula.to_json(),
                "entropy_oracle": oracle.to_json(),
                "agreement": formula == oracle,
                "diagnostics": diagnostics.to_json(),
            },
            "provenance": {"entropy": REDUCTION, "entropy_oracle": QUOTIENT_ORACLE},
        }
    if req.endo is None:
        raise ParseError("periodic entropy needs the per-prime blocks 'endo'")
    periodic_group = PeriodicGroup.from_json(req.components)
    family = PeriodicEndomorphism.from_json(periodic_group, req.endo)
    family.ensure_valid()
    per_prime = {}
    total_formula = EntropyValue.zero()
    total_oracle = EntropyValue.zero()
    for p, endo in family.endomorphisms.items():
        formula = endo.entropy()
        oracle, _ = htop_oracle(
            endo.torsion_free_quotient_matrix(), p, req.window, req.cap
        )
        per_prime[str(p)] = {
            "entropy": formula.to_json(),
            "entropy_oracle": oracle.to_json(),
            "agreement": formula == oracle,
        }
        total_formula = total_formula + formula
        total_oracle = total_oracle + oracle
    return {
        "command": "entropy",
        "status": "ok",
        "results": {
            "entropy": total_formula.to_json(),
            "entropy_oracle": total_oracle.to_json(),
            "agreement": total_formula == total_oracle,
            "per_prime": per_prime,
        },
        "provenance": {
            "entropy": f"{PRIME_SUM}; per prime: {REDUCTION}",
            "entropy_oracle": f"{PRIME_SUM}; per prime: {QUOTIENT_ORACLE}",
        },
    }


def run_scale(req: ScaleRequest) -> dict:
    matrix, p = _square_matrix(req.matrix, req.p)
    formula_scale = yuzvinski_scale(matrix, p)
    log_scale = yuzvinski_entropy(matrix, p)
    moeller, diagnostics = moeller_scale_oracle(matrix, p, None, req.window, req.cap)
    results = {
        "p": p,
        "scale": formula_scale,
        "log_scale": log_scale.to_json(),
        "moeller_scale": moeller,
        "agreement": formula_scale == moeller,
        "diagnostics": diagnostics.to_json(),
    }
    provenance = {
        "scale": "eigenvalue-norm product (scale counterpart of the Yuzvinski formula)",
        "log_scale": YUZVINSKI,
        "moeller_scale": MOELLER,
    }
    if req.search_range is not None:
        best, witness = min_scale_search(matrix, p, tuple(req.search_range))
        results["min_search"] = {
            "best_index": best,
            "witness": witness.to_json(),
            "range": list(req.search_range),
        }
        provenance["min_search"] = MIN_SEARCH
    return {"command": "scale", "status": "ok", "results": results, "provenance": provenance}


def run_newton(req: NewtonRequest) -> dict:
    p = ensure_prime(req.p)
    poly = parse_monic_polynomial(req.poly)
    polygon = newton_polygon(poly, p)
    valuations = root_valuations(poly, p)
    return {
        "command": "newton",
        "status": "ok",
        "results": {
            "p": p,
            "polynomial": poly.to_string(),
            "polygon": polygon.to_json(),
            "root_valuations": valuations.to_json(),
            "entropy_exponent": polynomial_entropy_exponent(poly, p),
        },
        "provenance": {
            "polygon": "lower convex hull of (i, vp(a_i))",
            "root_valuations": "polygon segments: slope s, length l -> l roots of valuation -s",
            "entropy_exponent": "sum of -v over root valuations v < 0",
        },
    }


def run_oracle(req: OracleRequest) -> dict:
    matrix, p = _square_matrix(req.matrix, req.p)
    oracle, diagnostics = htop_oracle(matrix, p, req.window, req.cap)
    formula = yuzvinski_entropy(matrix, p)
    return {
        "command": "oracle",
        "status": "ok",
        "results": {
            "p": p,
            "entropy_oracle": oracle.to_json(),
            "entropy": formula.to_json(),
            "agreement": formula == oracle,
            "diagnostics": diagnostics.to_json(),
        },
        "provenance": {"entropy_oracle": ORACLE, "entropy": YUZVINSKI},
    }


def run_check_at(req: CheckATRequest) -> dict:
    p = ensure_prime(req.p)
    a1 = Matrix.from_json(req.a1)
    b = Matrix.from_json(req.b)
    a2 = Matrix.from_json(req.a2)
    report = check_addition_theorem(a1, b, a2, p, req.window, req.cap)
    return {
        "command": "check-at",
        "status": "ok",
        "results": {"p": p, **report.to_json()},
        "provenance": {
            "total": f"{YUZVINSKI} / {ORACLE}",
            "part1": f"{YUZVINSKI} / {ORACLE}",
            "part2": f"{YUZVINSKI} / {ORACLE}",
        },
    }


def run_classify(req: ClassifyRequest) -> dict:
    if (req.group is None) == (req.components is None):
        raise ParseError("classify payload must contain exactly one of 'group' or 'components'")
    if req.group is not None:
        group = FiniteRankPGroup.from_json(req.group)
        classification = group.classify()
        reason = (
            f"n2 = {group.n2}: "
            + ("no Q_p factor, every endomorphism has zero entropy"
               if group.n2 == 0
               else "a Q_p factor admits positive-entropy endomorphisms")
        )
        results = {"group": group.to_json(), "classification": classification.value, "reason": reason}
    else:
        periodic_group = PeriodicGroup.from_json(req.components)
        classification = periodic_group.classify()
        per_prime = {
            str(p): component.classify().value
            for p, component in periodic_group.components.items()
        }
        reason = "E0 iff every prime component is E0 (finite support keeps entropy finite)"
        results = {
            "components": periodic_group.to_json()["components"],
            "per_prime": per_prime,
            "classification": classification.value,
            "reason": reason,
        }
    return {
        "command": "classify",
        "status": "ok",
        "results": results,
        "provenance": {"classification": CLASSIFICATION},
    }


def run_heisenberg(req: HeisenbergRequest) -> dict:
    p = ensure_prime(req.p)
    results: dict = {"ring": req.ring, "p": p}
    provenance: dict = {}
    has_endo = req.s is not None or req.t is not None
    if has_endo:
        if req.s is None or req.t is None:
            raise ParseError("a diagonal endomorphism needs both 's' and 't'")
        s = parse_rational(req.s)
        t = parse_rational(req.t)
        endo = DiagonalEndo(s, t)
        if req.ring == "zp" and not endo.preserves_integral_subgroup(p):
            raise ValidationError(
                "s and t must be p-integral to define an endomorphism of H(Z_p)"
            )
        results["s"] = format_rational(s)
        results["t"] = format_rational(t)
        formula = None
        if endo.is_automorphism():
            formula = entropy_diagonal(endo, p)
            results["entropy"] = formula.to_json()
            provenance["entropy"] = SPLITTING
        if req.oracle or formula is None:
            oracle, diagnostics = entropy_oracle_diagonal(endo, p, req.window, req.cap)
            results["entropy_oracle"] = oracle.to_json()
            results["diagnostics"] = diagnostics.to_json()
            provenance["entropy_oracle"] = BOX_ORACLE
            results["agreement"] = formula == oracle if formula is not None else None
    if req.classify or not has_endo:
        classification = classify_heisenberg(req.ring, p, req.sample_size, req.seed)
        results["classification_report"] = classification.to_json()
        provenance["classification_report"] = (
            f"{CLASSIFICATION}; evidence via {BOX_ORACLE}"
        )
    return {"command": "heisenberg", "status": "ok", "results": results, "provenance": provenance}


_RUNNERS = {
    "entropy": run_entropy,
    "scale": run_scale,
    "newton": run_newton,
    "oracle": run_oracle,
    "check-at": run_check_at,
    "classify": run_classify,
    "heisenberg": run_heisenberg,
}


def run(command: str, payload: dict) -> dict:
    """Validate a raw payload against the command's schema and execute it."""
    model = REQUEST_MODELS.get(command)
    if model is None:
        raise ParseError(f"unknown command {command!r}")
    try:
        request = model.model_validate(payload)
    except pydantic.ValidationError as exc:
        raise ParseError(f"invalid {command} payload: {exc}") from None
    return _RUNNERS[command](request)
