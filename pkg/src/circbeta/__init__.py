"""circbeta: recurrence-based sampling for circular beta ensembles, their
rank-1 perturbations and Cayley-transformed Cauchy relatives, plus a
numerical verification lab for the closed-form identities behind them."""

__version__ = "0.1.0"

from .angles import arg_in_0_2pi, cyclic_gaps, is_cyclically_interlaced, wrap_angle  # noqa: E402
from .linalg import (  # noqa: E402
    RealEigenData,
    RealSchurParameters,
    SchurParameters,
    TridiagonalMatrix,
    UnitEigenData,
    build_hessenberg,
    build_real_orthogonal,
    dual_product,
    eigen_real_orthogonal,
    eigen_symmetric_tridiag,
    eigen_unit,
    eigen_unit_paired,
    rank1_row_scale,
    realify_double,
    resolvent_11,
)
from .polynomials import (  # noqa: E402
    CauchyRecurrenceState,
    InterlacedRealSpectrum,
    InterlacedSpectrum,
    SzegoPair,
    bottom_run,
    cayley_angles,
    companion_roots,
    perturbed_spectrum,
    real_roots_sorted,
    szego_run,
    three_term_step,
    unit_circle_angles,
)
from .distributions import (  # noqa: E402
    GENERATOR_ID,
    RngStream,
    beta_draw,
    circle_pow,
    complex_gaussian_matrix,
    dirichlet,
    gen_cauchy_real,
    theta_nu,
)
from .ensembles import (  # noqa: E402
    EnsembleSpec,
    SampleBatch,
    sample_batch,
    sample_cbe,
    sample_circular_jacobi,
    sample_cse_dual,
    sample_haar,
    sample_joint_perturbed,
    superpose_and_decimate,
    trace_moment_table,
)
from .densities import density_eval, morris_constant  # noqa: E402
from .verify import CHECK_GROUPS, CheckReport, run_suite  # noqa: E402
