"""Independent reference computations used by the tests.

Nothing here imports the package's Bessel code or its Nystrom solver.
"""
from __future__ import annotations

import math

import mpmath
import numpy as np
from scipy import special

mpmath.mp.dps = 40


def k0_mp(z) -> float:
    return float(mpmath.besselk(0, z))


def k1_mp(z) -> float:
    return float(mpmath.besselk(1, z))


def i0_mp(z) -> float:
    return float(mpmath.besseli(0, z))


def i1_mp(z) -> float:
    return float(mpmath.besseli(1, z))


def k0_series_mp(z, terms=50) -> float:
    """K0 by its ascending series, summed at 40 digits."""
    z = mpmath.mpf(z)
    q = (z / 2) ** 2
    acc, h, term = mpmath.mpf(0), mpmath.mpf(0), mpmath.mpf(1)
    lead = -(mpmath.log(z / 2) + mpmath.euler)
    for k in range(terms):
        if k:
            term *= q / (k * k)
            h += mpmath.mpf(1) / k
        acc += term * (lead + h)
    return float(acc)


def segment_midpoint_lambdas(length: float, E: float, n: int = 200, count: int = 5) -> np.ndarray:
    """Top eigenvalues of a plain midpoint Nystrom matrix for a straight segment.

    Off-diagonal entries use scipy's K0 at midpoints; the diagonal cell
    integrates the leading log term exactly.  First-order accurate only,
    good enough to count levels.
    """
    kappa = math.sqrt(-E)
    h = length / n
    s = (np.arange(n) + 0.5) * h
    r = np.abs(s[:, None] - s[None, :])
    np.fill_diagonal(r, 1.0)
    A = special.k0(kappa * r) * h / (2 * math.pi)
    diag = h * (1.0 - math.log(kappa * h / 4.0) - np.euler_gamma) / (2 * math.pi)
    np.fill_diagonal(A, diag)
    return np.sort(np.linalg.eigvalsh(A))[::-1][:count]


def segment_mu(length: float, j: int) -> float:
    return (j * math.pi / length) ** 2


def hadamard_constant(kappa_of_s, length: float, j: int, M: int = 4000) -> float:
    """6 (psi_j'(0)^2 + psi_j'(L)^2) for -psi'' - kappa^2/4 psi = mu psi, Dirichlet on [0, L].

    The endpoint-shift derivative of a Dirichlet eigenvalue is -psi'(end)^2,
    so moving both ends out by a = 6 log(beta)/beta changes mu_j by at most
    this constant times log(beta)/beta while |psi'| shrinks with the interval.
    Plain dense eigensolver on a second-order grid.
    """
    h = length / (M + 1)
    s = h * np.arange(1, M + 1)
    main = 2.0 / h ** 2 - 0.25 * np.asarray(kappa_of_s(s)) ** 2
    T = np.diag(main) - np.diag(np.full(M - 1, 1.0 / h ** 2), 1) - np.diag(np.full(M - 1, 1.0 / h ** 2), -1)
    _, vecs = np.linalg.eigh(T)
    psi = vecs[:, j - 1] / math.sqrt(h)
    d0 = (4 * psi[0] - psi[1]) / (2 * h)
    d1 = (4 * psi[-1] - psi[-2]) / (2 * h)
    return 6.0 * (d0 ** 2 + d1 ** 2)
