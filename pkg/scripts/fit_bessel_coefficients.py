"""Regenerate the Chebyshev tables used by ``leakyarc.specfun`` for z > 2.

The tabulated function is ``sqrt(z) * exp(z) * K_nu(z)`` expressed in the
variable ``w = 4/z - 1`` on ``[-1, 1]``.  Values come from mpmath at 40
digits; the printed coefficients are pasted into ``_chebyshev_tables.py``.

    python scripts/fit_bessel_coefficients.py
"""
import mpmath as mp

mp.mp.dps = 40
DEGREE = 48


def scaled(nu, w):
    if w == -1:
        return mp.sqrt(mp.pi / 2)
    z = 4 / (w + 1)
    return mp.sqrt(z) * mp.exp(z) * mp.besselk(nu, z)


def chebyshev_coefficients(f, n):
    nodes = [mp.cos(mp.pi * (k + mp.mpf(1) / 2) / n) for k in range(n)]
    values = [f(x) for x in nodes]
    coeffs = []
    for j in range(n):
        acc = mp.fsum(values[k] * mp.cos(mp.pi * j * (k + mp.mpf(1) / 2) / n) for k in range(n))
        coeffs.append(2 * acc / n)
    coeffs[0] /= 2
    return coeffs


def main():
    for nu in (0, 1):
        coeffs = chebyshev_coefficients(lambda w: scaled(nu, w), DEGREE)
        keep = [c for c in coeffs]
        while abs(keep[-1]) < mp.mpf("1e-19"):
            keep.pop()
        print(f"K{nu}E_CHEB = (")
        for c in keep:
            print(f"    {mp.nstr(c, 20, min_fixed=-1, max_fixed=-1)},")
        print(")")


if __name__ == "__main__":
    main()
