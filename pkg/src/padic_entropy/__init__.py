"""Exact topological entropy and Willis scale of endomorphisms of finite-rank
locally compact abelian p-groups, with independent brute-force oracles."""

from .errors import ParseError, PadicEntropyError, StabilizationError, ValidationError
from .padic import (
    INFINITY,
    EntropyValue,
    ensure_prime,
    format_rational,
    is_p_integral,
    is_prime,
    parse_rational,
    pnorm,
    reduce_mod_p_power,
    vp,
)
from .linalg import (
    Lattice,
    Matrix,
    MonicPolynomial,
    companion_matrix,
    hstack,
    integral_preimage_lattice,
    lattice_canonicalize,
    lattice_index,
    lattice_intersection,
    lattice_sum,
    vstack,
)
from .newton import (
    NewtonPolygon,
    RootValuationMultiset,
    newton_polygon,
    parse_monic_polynomial,
    root_valuations,
    yuzvinski_entropy,
    yuzvinski_scale,
)
from .groups import (
    BlockEndomorphism,
    EntropyClass,
    FiniteRankPGroup,
    MixedElement,
    classify,
    dual_group,
    rank_p,
)
from .engine import (
    AdditionTheoremReport,
    LimitDiagnostics,
    check_addition_theorem,
    cotrajectory,
    htop_oracle,
    min_scale_search,
    moeller_scale_oracle,
)
from .periodic import PeriodicEndomorphism, PeriodicGroup, classify_periodic
from .heisenberg import (
    DiagonalEndo,
    HeisenbergClassification,
    HeisenbergElement,
    InnerAuto,
    classify_heisenberg,
    entropy_diagonal,
    entropy_inner,
    entropy_oracle_diagonal,
    hmul,
)

__version__ = "0.1.0"
