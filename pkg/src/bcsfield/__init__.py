"""BCS thermodynamics with an imaginary magnetic field.

Numerical library for the mean-field BCS model whose Hamiltonian carries an
imaginary magnetic-field term i*theta*S_z.  Everything observable enters
through the scalar gap function

    g(x, t, z) = -2/|U| + D_d * Int Tr [ sinh(x*sqrt(E^2+z^2))
                  / ((cos(t/2) + cosh(x*sqrt(E^2+z^2))) * sqrt(E^2+z^2)) ] dk

over the Brillouin zone.  The package solves the gap equation, locates the
critical inverse temperature beta_c, traces the phase boundary tau(beta),
evaluates the free energy density with its second-derivative jump structure,
and classifies the boundary-curve shape via the exact 3 - 2*sqrt(2)
threshold machinery.  Every numerical path is cross-validated by a
closed-form oracle.
"""

from .dispersion import (
    BZGeometry,
    ConstantDiagonal,
    Cosine1D,
    DispersionModel,
    MeasureFractions,
    MultiOrbitalDiagonal,
    build_bump_dispersion,
    canonical_geometry,
    verify_bounds,
)
from .bzquad import QuadratureConfig, QuadratureError, trace_integral
from .gapcore import (
    GapResult,
    ModelParams,
    Regime,
    RootConfig,
    SolverConfig,
    canonical_time,
    dg_dt,
    dg_dx,
    dg_dz,
    g,
    solve_beta_c,
    solve_delta,
    solve_tau,
)
from .freeenergy import (
    FreeEnergyPoint,
    JumpReport,
    f_hat,
    first_derivatives,
    free_energy,
    free_energy_point,
    odlro_and_density,
    second_derivative_jumps,
    ssb_order,
)
from .boundary import (
    BoundaryCurve,
    CurveGrid,
    ShapeVerdict,
    a_hat,
    a_minus,
    a_plus,
    big_w,
    classify_shape,
    multiorbital_exact_tau_check,
    tau_prime,
    tau_second,
    trace_curve,
    w_tilde,
)
from .closedform import (
    ALGEBRAIC_CONSTANTS,
    AlgebraicConstants,
    constant_model_beta_c,
    constant_model_delta,
    constant_model_tau,
    cosine_integral_closed,
)

__version__ = "0.1.0"
