"""Invariant hyperkahler structures on tangent bundles of compact
Hermitian symmetric spaces, with a numerical verification engine."""

from .lie_core import (
    CompactLieAlgebra,
    Endo,
    SpectralDomainError,
    build_algebra,
    symmetric_spectral,
)
from .hermitian import (
    HermitianPair,
    RootDatum,
    SpaceSpec,
    build_pair,
    check_I_in_AdK,
    compute_root_datum,
    parse_space,
)
from .restricted import (
    MooreViolation,
    RestrictedRootSystem,
    StronglyOrthogonalSet,
    cascade,
    restricted_decomposition,
)
from .fields import (
    HKParams,
    make_params,
    A_op,
    upsilon,
    upsilon_star,
    q_hat,
    b_scalar,
    B_op,
    P_op,
    potential,
)

__version__ = "0.1.0"
