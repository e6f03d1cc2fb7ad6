"""Bound states of -Laplacian - beta delta on an open planar arc, at strong coupling."""
from .asympt import RateFit, SweepTable, check_apriori, fit_rate, sweep
from .bs_solver import (BoundState, EssentialSpectrum, NoSuchLevel, NonMonotoneDetected,
                        TooCloseToArc, assemble, bs_eigenvalues, eigenfunction_grid,
                        reconstruct_u, solve_eigenvalue, verify_decay)
from .curve import (ArcCurve, ClosedLoop, CurveError, TubeTooWide, make_circular_arc,
                    make_parametric, make_polynomial, make_segment)
from .effective1d import MarginExceeded, dirichlet_eigenvalues, extended_eigenvalues
from .specfun import k0, k0e, k1, k1e

__all__ = [
    "ArcCurve", "BoundState", "ClosedLoop", "CurveError", "EssentialSpectrum", "MarginExceeded",
    "NoSuchLevel", "NonMonotoneDetected", "RateFit", "SweepTable", "TooCloseToArc", "TubeTooWide",
    "assemble", "bs_eigenvalues", "check_apriori", "dirichlet_eigenvalues", "eigenfunction_grid",
    "extended_eigenvalues", "fit_rate", "k0", "k0e", "k1", "k1e", "make_circular_arc",
    "make_parametric", "make_polynomial", "make_segment", "reconstruct_u", "solve_eigenvalue",
    "sweep", "verify_decay",
]
