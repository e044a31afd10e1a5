"""Equivariant matrix models of the Grassmann, flag and Stiefel manifolds."""

from .errors import *  # noqa: F401,F403
from .flag import (
    AbstractFlag,
    FlagSignature,
    Genericity,
    IsospectralParams,
    IsospectralPoint,
    cond_number,
    flag_construct,
    flag_extract,
    flag_homotopy_convert,
    flag_membership_full,
    flag_membership_generic,
    genericity_check,
    params_optimize_cond,
    params_traceless,
    sign_pattern_compatible,
    signature_multiplicities,
    solve_multiplicities,
    solve_vandermonde,
    trace_powers,
)
from .grassmann import (
    INVOLUTION,
    PROJECTION,
    GrassmannPoint,
    QuadraticParams,
    gr_construct,
    gr_convert_affine,
    gr_extract,
    gr_from_basis,
    gr_from_isospectral,
    gr_membership,
    gr_to_isospectral,
    gr_traceless_params,
    rp1_embed,
)
from .io import ModelManifest, read_manifest, read_model, write_manifest, write_model
from .linalg import (
    PRNG_ID,
    cholesky_upper,
    cluster_eigenvalues,
    haar_rotation,
    qr_positive,
    spd_power,
    sym_eigh,
)
from .metrics import (
    FlagMTangent,
    StiefelMTangent,
    embedded_metric,
    flag_m_metric,
    stiefel_m_metric,
    tangent_project_flag,
    tangent_pull_flag,
    tangent_push_flag,
    tangent_push_stiefel,
)
from .product import GrassmannProductPoint, flag_to_product, product_to_flag
from .report import MembershipReport
from .stiefel import (
    CholeskyStiefelPoint,
    Factors,
    cartan_geodesic,
    cartan_metric,
    geometric_mean_t,
    st_construct,
    st_convert_homotopy,
    st_factors,
    st_membership,
)

__version__ = "0.1.0"
