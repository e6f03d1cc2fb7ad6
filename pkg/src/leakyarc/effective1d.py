"""Dirichlet eigenvalues of -d^2/ds^2 - kappa(s)^2/4 on an interval of the curve.

Three-point finite differences on M interior nodes, then one Richardson step
against the grid with twice as many intervals.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .curve import ArcCurve, beta_floor, tube_halfwidth


class EffectiveError(ValueError):
    pass


class MarginExceeded(EffectiveError):
    pass


def default_grid(j_max: int) -> int:
    return max(2000, 200 * j_max)


@dataclass(frozen=True)
class EffectiveSpectrum:
    s0: float
    s1: float
    M: int
    eigenvalues: np.ndarray
    error: np.ndarray

    @property
    def h(self) -> float:
        return (self.s1 - self.s0) / (self.M + 1)

    def rows(self):
        return [(j + 1, float(mu), float(err)) for j, (mu, err) in enumerate(zip(self.eigenvalues, self.error))]


def fd_eigenvalues(curve: ArcCurve, s0: float, s1: float, j_max: int, intervals: int) -> np.ndarray:
    """Lowest j_max eigenvalues of the plain second-order scheme with ``intervals`` cells."""
    h = (s1 - s0) / intervals
    s = s0 + h * np.arange(1, intervals)
    diag = 2.0 / h ** 2 - 0.25 * curve.curvature(s) ** 2
    off = np.full(intervals - 2, -1.0 / h ** 2)
    return eigh_tridiagonal(diag, off, eigvals_only=True, select="i",
                            select_range=(0, j_max - 1))


def dirichlet_eigenvalues(curve: ArcCurve, s0: float = 0.0, s1: float | None = None,
                          j_max: int = 5, M: int | None = None) -> EffectiveSpectrum:
    s1 = curve.length if s1 is None else float(s1)
    lo, hi = curve.extent
    slack = 1e-12 * (hi - lo)
    if s0 < lo - slack or s1 > hi + slack or not s1 > s0:
        raise EffectiveError(f"interval [{s0}, {s1}] not inside the curve extension [{lo}, {hi}]")
    M = default_grid(j_max) if M is None else int(M)
    if j_max >= M:
        raise EffectiveError("j_max must be smaller than the grid size")
    if M < 8 * j_max:
        raise EffectiveError("grid too coarse: need M >= 8 j_max")
    coarse = fd_eigenvalues(curve, s0, s1, j_max, M + 1)
    fine = fd_eigenvalues(curve, s0, s1, j_max, 2 * (M + 1))
    extrapolated = (4.0 * fine - coarse) / 3.0
    return EffectiveSpectrum(float(s0), s1, M, extrapolated, np.abs(extrapolated - fine))


def extended_eigenvalues(curve: ArcCurve, beta: float, j_max: int = 5,
                         M: int | None = None) -> EffectiveSpectrum:
    """Dirichlet spectrum on the prolonged interval [-a, L + a], a = 6 log(beta)/beta."""
    a = tube_halfwidth(beta)
    if not a < curve.margin:
        raise MarginExceeded(
            f"a(beta) = {a:.4g} exceeds the margin {curve.margin:.4g}; "
            f"need beta > {beta_floor(curve.margin):.4g}")
    return dirichlet_eigenvalues(curve, -a, curve.length + a, j_max, M)


__all__ = ["EffectiveSpectrum", "dirichlet_eigenvalues", "extended_eigenvalues", "fd_eigenvalues",
           "EffectiveError", "MarginExceeded", "default_grid"]
