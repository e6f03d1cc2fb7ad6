import math

import numpy as np
import pytest

from leakyarc import curve as cv
from leakyarc.effective1d import (EffectiveError, MarginExceeded, dirichlet_eigenvalues,
                                  extended_eigenvalues, fd_eigenvalues)

PI_SEG = cv.make_segment(math.pi)
QUARTER = cv.make_circular_arc(1.0, math.pi / 2)
PARABOLA = cv.make_polynomial([0.0, 1.0], [0.0, 0.0, 0.5], (-1.0, 1.0))


def test_segment_pi_is_squares():
    spec = dirichlet_eigenvalues(PI_SEG, 0.0, math.pi, 3)
    np.testing.assert_allclose(spec.eigenvalues, [1, 4, 9], atol=1e-6)
    assert spec.h == pytest.approx(math.pi / (spec.M + 1))


def test_quarter_circle_shift():
    spec = dirichlet_eigenvalues(QUARTER, j_max=2)
    np.testing.assert_allclose(spec.eigenvalues, [3.75, 15.75], atol=1e-6)


def test_parabola_refinement():
    a = dirichlet_eigenvalues(PARABOLA, j_max=1, M=2000).eigenvalues[0]
    b = dirichlet_eigenvalues(PARABOLA, j_max=1, M=4001).eigenvalues[0]
    assert abs(a - b) < 1e-7


def test_error_estimate_is_honest():
    spec = dirichlet_eigenvalues(PI_SEG, 0.0, math.pi, 4, M=200)
    actual = np.abs(spec.eigenvalues - np.arange(1, 5) ** 2)
    assert np.all(actual <= spec.error * 1.01 + 1e-12)


def test_second_order_convergence():
    M = 200
    e1 = abs(fd_eigenvalues(PI_SEG, 0.0, math.pi, 2, M)[1] - 4.0)
    e2 = abs(fd_eigenvalues(PI_SEG, 0.0, math.pi, 2, 2 * M)[1] - 4.0)
    assert 3.5 <= e1 / e2 <= 4.5


def test_extended_segment_closed_form():
    beta = math.exp(6.0)
    a = 6 * math.log(beta) / beta
    spec = extended_eigenvalues(cv.make_segment(1.0), beta, 2)
    assert spec.eigenvalues[0] == pytest.approx(math.pi ** 2 / (1 + 2 * a) ** 2, abs=1e-6)
    base = dirichlet_eigenvalues(cv.make_segment(1.0), j_max=2)
    assert np.all(spec.eigenvalues < base.eigenvalues)


def test_margin_exceeded_reports_floor():
    with pytest.raises(MarginExceeded, match="beta >"):
        extended_eigenvalues(QUARTER, 50.0, 2)


def test_interlacing_and_potential_bounds():
    K = PARABOLA.max_curvature()
    prev = None
    for grow in (0.0, 0.1, 0.2, 0.3):
        s0, s1 = -grow, PARABOLA.length + grow
        mu = dirichlet_eigenvalues(PARABOLA, s0, s1, 4).eigenvalues
        free = (np.arange(1, 5) * math.pi / (s1 - s0)) ** 2
        assert np.all(mu <= free + 1e-9) and np.all(mu >= free - K ** 2 / 4 - 1e-9)
        assert np.all(np.diff(mu) > 0)
        if prev is not None:
            assert np.all(mu <= prev + 1e-12)
        prev = mu


@pytest.mark.parametrize("kwargs", [dict(s0=-1.0), dict(s1=5.0), dict(j_max=5, M=30),
                                    dict(j_max=40, M=30)])
def test_errors(kwargs):
    with pytest.raises(EffectiveError):
        dirichlet_eigenvalues(cv.make_segment(1.0), **kwargs)
