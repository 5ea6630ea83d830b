"""Finite-difference experiments on nonclassical shock waves.

Four diffusive-dispersive regularizations of nonconvex conservation laws —
a cubic scalar law with linear viscosity-capillarity, a lubrication
(thin-film) model with nonlinear fourth-order regularization, a
Camassa-Holm-type nonlinear dispersion variant, and a two-field elastic
system with van der Waals or piecewise-linear pressure — integrated with
high-order centered differences and explicit Runge-Kutta schemes.  Wave
structures of Riemann problems are classified from late-time plateaus, and
kinetic functions (the selection rule mapping the upstream state of an
undercompressive front to its downstream state) are measured and compared
against closed-form references where they exist.
"""

from .errors import (EXIT_BLOWUP, EXIT_CONFIG, EXIT_OK, EXIT_UNRESOLVED,
                     ConfigurationError, DegenerateShockError, DomainError,
                     NumericalBlowupError, PositivityError,
                     UnresolvedWaveError)
from .grids import BoundaryTreatment, Grid1D
from .psystem import (PressureLaw, PSystemModel, find_inflection_points,
                      validate_piecewise_continuity)
from .riemann import (KineticSample, RiemannProblem, RunSetup, SweepConfig,
                      build_initial_data, build_setup, compare_exact,
                      default_end_time, lubrication_sweep_plan, make_sample,
                      run_single, sweep_kinetic)
from .reporting import (CSV_HEADER, dump_field, emit_csv, emit_gnuplot,
                        parse_csv, read_csv, write_csv)
from .scalar_models import (CUBIC_FLUX, THIN_FILM_FLUX, CamassaHolmModel,
                            CubicModel, FluxFn, HelmholtzSolver,
                            ThinFilmModel)
from .stencils import (StencilCoefficients, apply_stencil, make_stencil,
                       validate_stencils)
from .time_integration import (ButcherTableau, RunConfig, builtin_tableau,
                               compute_dt, integrate, rk_step, verify_order)
from .wave_analysis import (ExactKineticCubic, Interface, Plateau, ShockSet,
                            WaveReport, classify_structure,
                            default_plateau_tol, detect_plateaus,
                            entropy_dissipation_cubic,
                            entropy_dissipation_thin_film,
                            exact_kinetic_cubic, extract_kinetic_pair,
                            flattest_window_amplitude, lax_check,
                            middle_state_right_of_sign_change,
                            psystem_front_kind, shock_set_cubic,
                            shock_speed_rh, thin_film_tangent,
                            thin_film_zero_dissipation)

__version__ = "0.1.0"

__all__ = [
    "BoundaryTreatment", "ButcherTableau", "CSV_HEADER", "CUBIC_FLUX",
    "CamassaHolmModel", "ConfigurationError", "CubicModel",
    "DegenerateShockError", "DomainError", "EXIT_BLOWUP", "EXIT_CONFIG",
    "EXIT_OK", "EXIT_UNRESOLVED", "ExactKineticCubic", "FluxFn", "Grid1D",
    "HelmholtzSolver", "Interface", "KineticSample", "NumericalBlowupError",
    "PSystemModel", "Plateau", "PositivityError", "PressureLaw",
    "RiemannProblem", "RunConfig", "RunSetup", "ShockSet",
    "StencilCoefficients", "SweepConfig", "THIN_FILM_FLUX", "ThinFilmModel",
    "UnresolvedWaveError", "WaveReport", "apply_stencil",
    "build_initial_data", "build_setup", "builtin_tableau",
    "classify_structure", "compare_exact", "compute_dt", "default_end_time",
    "default_plateau_tol", "detect_plateaus", "dump_field", "emit_csv",
    "emit_gnuplot", "entropy_dissipation_cubic",
    "entropy_dissipation_thin_film", "exact_kinetic_cubic",
    "extract_kinetic_pair", "find_inflection_points",
    "flattest_window_amplitude", "integrate", "lax_check",
    "lubrication_sweep_plan", "make_sample", "make_stencil",
    "middle_state_right_of_sign_change", "parse_csv", "psystem_front_kind",
    "read_csv", "rk_step", "run_single",
    "shock_set_cubic", "shock_speed_rh", "sweep_kinetic",
    "thin_film_tangent", "thin_film_zero_dissipation",
    "validate_piecewise_continuity", "validate_stencils", "verify_order",
    "write_csv",
]
