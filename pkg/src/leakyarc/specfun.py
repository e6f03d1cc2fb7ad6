"""Modified Bessel functions K0, K1 (and I0, I1) for real positive arguments.

Two branches, split at z = 2:

* z <= 2: ascending series, with the ``-log(z/2) I_nu(z)`` term written out;
* z > 2: Chebyshev expansion of ``sqrt(z) e^z K_nu(z)`` in ``w = 4/z - 1``.

All functions accept scalars or arrays and return the same shape.  The
exponentially scaled variants ``k0e``/``k1e`` stay finite far beyond the
point where ``K_nu`` underflows.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import chebyshev as _cheb

from ._chebyshev_tables import K0E_CHEB, K1E_CHEB

EULER_GAMMA = 0.57721566490153286061
SPLIT = 2.0

_N_SMALL = 16
_N_I = 72  # enough terms for I0/I1 up to z = 30


def _series_tables():
    fact = [math.factorial(k) for k in range(_N_I + 2)]
    psi = [-EULER_GAMMA]
    for k in range(1, _N_I + 2):
        psi.append(psi[-1] + 1.0 / k)
    i0 = np.array([1.0 / fact[k] ** 2 for k in range(_N_I)])
    i1 = np.array([1.0 / (fact[k] * fact[k + 1]) for k in range(_N_I)])
    k0 = np.array([psi[k] / fact[k] ** 2 for k in range(_N_SMALL)])
    k1 = np.array([(psi[k] + psi[k + 1]) / (fact[k] * fact[k + 1]) for k in range(_N_SMALL)])
    return i0, i1, k0, k1


_I0_COEF, _I1_COEF, _K0_COEF, _K1_COEF = _series_tables()
_K0E = np.array(K0E_CHEB)
_K1E = np.array(K1E_CHEB)


@dataclass(frozen=True)
class BesselEval:
    """K_nu evaluated at z together with its overflow-safe scaled form e^z K_nu(z)."""

    value: np.ndarray | float
    scaled_value: np.ndarray | float


def _horner(coef, q):
    acc = np.full_like(q, coef[-1])
    for c in coef[-2::-1]:
        acc = acc * q + c
    return acc


def _as_array(z):
    z = np.asarray(z, dtype=float)
    return z, z.ndim == 0


def _out(values, scalar):
    return float(values) if scalar else values


def _check_positive(z):
    if np.any(~(z > 0)):
        raise ValueError("modified Bessel K is defined for z > 0 only")


def _small_k0(z):
    q = 0.25 * z * z
    return -np.log(0.5 * z) * _horner(_I0_COEF[:_N_SMALL], q) + _horner(_K0_COEF, q)


def _small_k1(z):
    q = 0.25 * z * z
    i1 = 0.5 * z * _horner(_I1_COEF[:_N_SMALL], q)
    return 1.0 / z + np.log(0.5 * z) * i1 - 0.25 * z * _horner(_K1_COEF, q)


def _large_scaled(z, table):
    return _cheb.chebval(4.0 / z - 1.0, table) / np.sqrt(z)


def _k(z, small, table, scaled):
    z, scalar = _as_array(z)
    _check_positive(z)
    out = np.empty_like(z)
    lo = z <= SPLIT
    hi = ~lo
    if np.any(lo):
        zl = z[lo]
        out[lo] = small(zl) * np.exp(zl) if scaled else small(zl)
    if np.any(hi):
        zh = z[hi]
        val = _large_scaled(zh, table)
        out[hi] = val if scaled else val * np.exp(-zh)
    return _out(out, scalar)


def k0(z):
    """K_0(z) for z > 0."""
    return _k(z, _small_k0, _K0E, scaled=False)


def k1(z):
    """K_1(z) for z > 0."""
    return _k(z, _small_k1, _K1E, scaled=False)


def k0e(z):
    """Exponentially scaled e^z K_0(z)."""
    return _k(z, _small_k0, _K0E, scaled=True)


def k1e(z):
    """Exponentially scaled e^z K_1(z)."""
    return _k(z, _small_k1, _K1E, scaled=True)


def bessel_k0(z) -> BesselEval:
    return BesselEval(k0(z), k0e(z))


def bessel_k1(z) -> BesselEval:
    return BesselEval(k1(z), k1e(z))


def _check_i_range(z):
    if np.any(z < 0) or np.any(z > 30.0):
        raise ValueError("I0/I1 series are provided for 0 <= z <= 30")


def i0(z):
    """I_0(z) on [0, 30] by the ascending series."""
    z, scalar = _as_array(z)
    _check_i_range(z)
    return _out(_horner(_I0_COEF, 0.25 * z * z), scalar)


def i1(z):
    """I_1(z) on [0, 30] by the ascending series."""
    z, scalar = _as_array(z)
    _check_i_range(z)
    return _out(0.5 * z * _horner(_I1_COEF, 0.25 * z * z), scalar)


def k0_smooth_part(z):
    """Analytic remainder S(z) = K_0(z) + I_0(z) log(z/2), with S(0) = -gamma.

    Defined on [0, 30].  Below the series split S is summed directly, which
    avoids the cancellation of the two logarithmic terms.
    """
    z, scalar = _as_array(z)
    _check_i_range(z)
    out = np.empty_like(z)
    lo = z <= SPLIT
    out[lo] = _horner(_K0_COEF, 0.25 * z[lo] ** 2)
    hi = ~lo
    if np.any(hi):
        zh = z[hi]
        out[hi] = k0(zh) + i0(zh) * np.log(0.5 * zh)
    return _out(out, scalar)


bessel_i0 = i0
bessel_i1 = i1
