"""Hartley (H1, H2) and Fourier transforms, Hartley-Fourier and Hartley
convolutions, norm inequalities, and resolvent-based equation solvers on a
uniform grid."""

from .grid import (
    INF,
    ClosedForm,
    ConfigurationError,
    DecayWarning,
    ExponentTriple,
    FrequencyGrid,
    Grid,
    SampledFunction,
    WeightFunction,
    lp_norm,
    make_grid,
    quadrature,
    sample,
    weighted_lp_norm,
)
from .transforms import (
    TransformKind,
    inverse_fourier,
    inverse_hartley,
    inverse_transform,
    reference_transform,
    transform,
    transform_direct,
)
from .convolve import ConvKind, ConvResult, Engine, conv_direct, conv_spectral, convolve, engine_compare
from .analysis import (
    InequalityReport,
    l1_bound,
    linf_bound,
    noncommutativity_witness,
    saitoh_corollary,
    saitoh_weighted,
    submultiplicativity_check,
    sweep,
    titchmarsh_trivial,
    young_triple,
)
from .solvers import (
    DecayViolation,
    NearSingularError,
    Resolvent,
    SolveReport,
    helmholtz_apply,
    lr_bound_check,
    solve_barbashin,
    solve_cauchy,
    solve_fredholm,
    wiener_levy_resolvent,
)

__version__ = "0.1.0"
