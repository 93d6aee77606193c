import numpy as np
import pytest

from mzdist.errors import UnsupportedFamily, ZeroInformation
from mzdist.fisher import (FisherMethod, FisherResult, closed_form_fisher, cramer_rao_bound,
                           energy_discrepancy_curve, fisher_curve, fisher_energy_discrepancy, fisher_prob_derivative,
                           jy_variance)
from mzdist.rotation import get_engine
from mzdist.spin import FockZ, Noon, PhaseState, SpinJ, SpinState, make_fock_z, make_noon, make_phase_state, make_probe

THETAS = np.linspace(0, 2 * np.pi, 64, endpoint=False)


def families(j):
    yield Noon(0.0)
    yield PhaseState(0.4)
    for m in j.m_values:
        yield FockZ(float(m))


@pytest.mark.parametrize("two_j", range(1, 51))
def test_closed_forms_and_route_equivalence(two_j):
    j = SpinJ(two_j)
    for fam in families(j):
        s = make_probe(fam, j)
        ref = closed_form_fisher(fam, j).value
        a, deg_a = fisher_curve(s, THETAS)
        b, deg_b = energy_discrepancy_curve(s, THETAS)
        assert np.max(np.abs(a - ref)) / ref < 1e-9
        assert np.array_equal(deg_a, deg_b)
        assert np.max(np.abs(a - b)) / ref < 1e-8


def test_closed_form_values():
    assert closed_form_fisher(Noon(), SpinJ(2)).value == 4
    assert closed_form_fisher(FockZ("+j"), SpinJ(2)).value == 2
    assert closed_form_fisher(PhaseState(), SpinJ(1)).value == pytest.approx(1)
    assert closed_form_fisher(FockZ(0), SpinJ(10)).value == 60
    assert closed_form_fisher(Noon(), SpinJ(2)).method is FisherMethod.CLOSED_FORM
    with pytest.raises(UnsupportedFamily):
        closed_form_fisher("fock", SpinJ(2))


def test_single_photon_coincidence():
    j = SpinJ(1)
    for fam in (Noon(0.0), FockZ("+j"), PhaseState(0.3)):
        assert fisher_prob_derivative(make_probe(fam, j), 0.8).value == pytest.approx(1, rel=1e-12)


def test_noon_exact_at_structural_zeros():
    # at theta = 0 half the ports of an even-n NOON state are exactly dark
    s = make_noon(SpinJ(6))
    r = fisher_prob_derivative(s, 0.0)
    assert r.degenerate_terms > 0
    assert r.value == pytest.approx(36, rel=1e-12)
    e = fisher_energy_discrepancy(s, 0.0)
    assert e.degenerate_terms == r.degenerate_terms and e.value == pytest.approx(36, rel=1e-12)


def test_fock_energy_route_has_no_classical_term_at_zero():
    j = SpinJ(8)
    s = make_fock_z(j, 2)
    r = fisher_energy_discrepancy(s, 0.0)
    assert r.value == pytest.approx(4 * jy_variance(s), rel=1e-12)
    assert r.value == pytest.approx(2 * (20 - 4), rel=1e-12)


def test_finite_difference_oracle():
    h = 1e-6
    rng = np.random.default_rng(11)
    for two_j in (1, 4, 9):
        j = SpinJ(two_j)
        s = SpinState.normalized(j, rng.normal(size=j.dim) + 1j * rng.normal(size=j.dim))
        eng = get_engine(j)
        for t in (0.3, 1.9, 4.4):
            p = np.abs(eng.amplitudes(s.amps, [t - h, t, t + h])) ** 2
            fd = np.sum(((p[2] - p[0]) / (2 * h)) ** 2 / p[1])
            assert fisher_prob_derivative(s, t).value == pytest.approx(fd, rel=1e-5)


@pytest.mark.parametrize("two_j", range(1, 21))
def test_heisenberg_ceiling(two_j):
    j = SpinJ(two_j)
    rng = np.random.default_rng(1000 + two_j)
    z = rng.normal(size=(1000, j.dim)) + 1j * rng.normal(size=(1000, j.dim))
    for amps in z:
        s = SpinState.normalized(j, amps)
        v = fisher_prob_derivative(s, 0.37).value
        assert v <= 4 * jy_variance(s) * (1 + 1e-9) + 1e-12
        assert v <= 4 * j.j ** 2 + 1e-8


def test_theta_independence_for_fock_and_noon():
    t = np.linspace(0, 2 * np.pi, 101)
    for fam in (Noon(0.0), Noon(1.1), FockZ(1), FockZ("+j")):
        v, _ = fisher_curve(make_probe(fam, SpinJ(12)), t)
        assert (v.max() - v.min()) / v.max() < 1e-8


def test_phase_state_energy_route():
    j = SpinJ(10)
    s = make_phase_state(j, 0.0)
    assert fisher_energy_discrepancy(s, 0.5).value == pytest.approx(4 / 3 * 5 * 6, rel=1e-9)
    assert fisher_energy_discrepancy(s, 0.5).method is FisherMethod.ENERGY_DISCREPANCY


def test_cramer_rao_bound():
    assert cramer_rao_bound(FisherResult(100.0, FisherMethod.CLOSED_FORM, 0.0), 1) == pytest.approx(1 / 100)
    assert cramer_rao_bound(FisherResult(10.0, FisherMethod.CLOSED_FORM, 0.0), 1) == pytest.approx(1 / 10)
    j = 3.0
    assert cramer_rao_bound(2 * j * (j + 1), 1) == pytest.approx(1 / 24)
    assert cramer_rao_bound(40.0, 4) == pytest.approx(1 / 160)
    with pytest.raises(ZeroInformation):
        cramer_rao_bound(FisherResult(0.0, FisherMethod.CLOSED_FORM, 0.0), 5)
    with pytest.raises(ZeroInformation):
        cramer_rao_bound(fisher_prob_derivative(make_fock_z(SpinJ(0), 0), 0.2), 1)
