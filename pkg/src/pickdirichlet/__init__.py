"""Reproducing kernel spaces of Dirichlet series with the complete Pick property."""

from .embedding import (
    Embedding,
    embed_point,
    embedding_from_kernel,
    kernel_coefficients,
    kernel_eval,
    norm_of,
)
from .errors import (
    ConvergenceError,
    DepthError,
    DomainError,
    ModeError,
    NonUnitError,
    NotPickError,
    PickDirichletError,
    ShapeError,
    SupportError,
    ZeroKernelError,
)
from .families import FamilyId, family_coefficients, prime_embedding, prime_kernel_eval, prime_zeta
from .independence import dependence_witness, independence_check, multiplicative_rank, verify_witness
from .pick import KernelSpec, alpha_coefficients, check_complete_pick, growth_certificate
from .series import DirichletSeries, Mode, MultiIndex, convolve, factor, invert, primes_up_to
from .spectra import hermitian_inertia, mcq_test, normalize_kernel_matrix, pick_feasibility

__version__ = "0.1.0"
