"""Regulator, reduced-ideal cycle, and Pell machinery for real quadratic
fields, plus an exact Fourier period-sampling simulator."""

from .errors import (BadEstimateError, InputError, MalformedIdealError,
                     PrecisionError, QuadregError, ResourceCapError,
                     TrialsExhaustedError)
from .field import FieldCtx, QuadElem, make_field, make_order
from .ideal import (GammaVal, IdealPair, ReducedIdeal, StdIdeal, multiply,
                    principal_std, reduce_to_reduced, rho, rho_inv, sigma,
                    unit_ideal)
from .cycle import (CycleEntry, PrincipalCycle, check_cycle_bounds,
                    locate_on_cycle, walk_cycle)
from .navigator import (AnchoredIdeal, HValue, h_eval, near_unit_distance,
                        refine_regulator, star)
from .pell import (PellSolution, brute_force_pell, fundamental_pell_solution,
                   fundamental_unit, solutions)
from .qperiod import (DiscretizedH, GoodJ, HTildeValue, QRun, QSolveResult,
                      audit_weak_periodicity, build_run, decode_two_samples,
                      grid_premise_ok, h_tilde, qsolve)

__version__ = "0.1.0"

__all__ = [
    "AnchoredIdeal", "BadEstimateError", "CycleEntry", "DiscretizedH",
    "FieldCtx", "GammaVal", "GoodJ", "HTildeValue", "HValue", "IdealPair",
    "InputError", "MalformedIdealError", "PellSolution", "PrecisionError",
    "PrincipalCycle", "QRun", "QSolveResult", "QuadElem", "QuadregError",
    "ReducedIdeal", "ResourceCapError", "StdIdeal", "TrialsExhaustedError",
    "audit_weak_periodicity", "brute_force_pell", "build_run",
    "check_cycle_bounds", "decode_two_samples", "fundamental_pell_solution",
    "fundamental_unit", "grid_premise_ok", "h_eval", "h_tilde",
    "locate_on_cycle", "make_field", "make_order", "multiply",
    "near_unit_distance", "principal_std", "qsolve", "reduce_to_reduced",
    "refine_regulator", "rho", "rho_inv", "sigma", "solutions", "star",
    "unit_ideal", "walk_cycle",
]
