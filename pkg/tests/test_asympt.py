import math

import numpy as np
import pytest

from leakyarc import asympt, bs_solver
from leakyarc.asympt import SweepRow, SweepTable
from leakyarc.curve import make_segment

SEG = make_segment(1.0)
BETAS = [50.0, 100.0, 200.0, 400.0]


def synthetic(delta_of_beta, betas=BETAS, mu=1.0):
    rows = [SweepRow(b, 1, -b * b / 4 + mu + delta_of_beta(b), mu, 0, 0.0) for b in betas]
    return SweepTable(rows)


def test_rate_fit_definition():
    fit = asympt.fit_rate(synthetic(lambda b: 2 * math.log(b) / b))
    assert fit.C[1] == pytest.approx(2.0, rel=1e-6)
    assert fit.trend[1]


def test_rate_fit_dominated_remainder():
    fit = asympt.fit_rate(synthetic(lambda b: 1.0 / b))
    assert fit.C[1] <= 1.0 / math.log(50) + 1e-9
    assert fit.trend[1]


def test_rate_fit_constant_remainder_has_no_trend():
    assert not asympt.fit_rate(synthetic(lambda b: 0.3)).trend[1]


def test_rate_fit_needs_three_betas():
    with pytest.raises(asympt.InsufficientRows):
        asympt.fit_rate(synthetic(lambda b: 1 / b, betas=[50.0, 100.0]))


def test_apriori_synthetic():
    assert not asympt.check_apriori(SweepTable([SweepRow(60.0, 1, -3600.0, 1.0, 0, 0.0)]))
    assert asympt.check_apriori(SweepTable([SweepRow(60.0, 1, -900.0, 1.0, 0, 0.0)]))
    # rows below beta = 50 are not judged
    assert asympt.check_apriori(SweepTable([SweepRow(30.0, 1, -10.0, 1.0, 0, 0.0)]))


def test_sweep_rejects_bad_betas():
    with pytest.raises(asympt.SweepError):
        asympt.sweep(SEG, [])
    with pytest.raises(asympt.SweepError):
        asympt.sweep(SEG, [10.0, 50.0])
    with pytest.raises(asympt.SweepError):
        asympt.sweep(SEG, [50.0, 40.0])


@pytest.fixture(scope="module")
def small_sweep():
    return asympt.sweep(SEG, [20.0, 30.0], j_max=4)


def test_missing_levels_are_recorded(small_sweep):
    present = {(r.beta, r.j) for r in small_sweep.rows}
    assert (20.0, 4) not in present and (30.0, 4) in present
    assert [(m.beta, m.j) for m in small_sweep.missing] == [(20.0, 4)]
    assert "NoSuchLevel" in small_sweep.missing[0].reason
    assert all(np.isfinite(r.delta) for r in small_sweep.rows)
    assert asympt.check_ordering(small_sweep)
    assert small_sweep.metadata["curve_hash"] == asympt.curve_hash(SEG)


def test_rows_sorted_within_level(small_sweep):
    for j in small_sweep.levels():
        b = [r.beta for r in small_sweep.for_level(j)]
        assert b == sorted(b)


def test_ordering_check_detects_inversion():
    rows = [SweepRow(50.0, 1, -600.0, 1.0, 0, 0.0), SweepRow(50.0, 2, -610.0, 4.0, 0, 0.0)]
    assert not asympt.check_ordering(SweepTable(rows))


def test_csv_is_reproducible(small_sweep):
    again = asympt.sweep(SEG, [20.0, 30.0], j_max=4)
    assert again.to_csv() == small_sweep.to_csv()
    assert small_sweep.to_csv().splitlines()[0] == "beta,j,E,mu,delta,N,tol"


def test_parallel_matches_serial(small_sweep):
    par = asympt.sweep(SEG, [20.0, 30.0], j_max=4, workers=2)
    assert par.to_csv() == small_sweep.to_csv()


def test_all_rows_failing_aborts(monkeypatch):
    def fail(*a, **k):
        raise bs_solver.NoSuchLevel("none")

    monkeypatch.setattr(bs_solver, "solve_eigenvalue", fail)
    with pytest.raises(asympt.SweepError):
        asympt.sweep(SEG, [30.0], j_max=1)


def test_gap_consistency_segment():
    C = asympt.gap_consistency(SEG, BETAS, 2)
    # closed form on length 1 + 2a: mu(beta) - mu = (j pi)^2 ((1 + 2a)^-2 - 1)
    for j in (1, 2):
        exact = max(abs((j * math.pi) ** 2 * ((1 + 12 * math.log(b) / b) ** -2 - 1)) * b / math.log(b)
                    for b in BETAS)
        assert C[j] == pytest.approx(exact, rel=1e-6)
