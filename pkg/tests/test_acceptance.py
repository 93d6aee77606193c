"""Acceptance criteria, one test each, at their stated tolerances.

Each ``criterion_N`` returns (passed, detail). Under pytest every criterion
is a test and the PASS/FAIL lines are printed in the terminal summary; run
``python3 tests/test_acceptance.py`` to get the same lines without pytest.
"""
import functools
import math
import sys
import time

import numpy as np
import pytest

from mzdist.disting import (DistinguishabilityQuery, QuadratureSpec, default_nodes, disting, disting_sweep,
                            local_approx)
from mzdist.estimation import exact_binary_misid, misid_experiment, mse_experiment
from mzdist.fisher import closed_form_fisher, energy_discrepancy_curve, fisher_curve, fisher_prob_derivative
from mzdist.info import distribution, kl_divergence, noon_distribution_analytic
from mzdist.rotation import evolve, get_engine
from mzdist.spin import FockZ, Noon, PhaseState, SpinJ, SpinState, make_probe

PI = math.pi
THETAS = np.linspace(0, 2 * PI, 64, endpoint=False)
FIG2_FAMILIES = (Noon(0.0), FockZ(0.0), FockZ("+j"), PhaseState(PI / 2))
FIG2_N = list(range(5, 51))
FIG2_CHI = [PI / 2, 3 * PI / 4, PI]
FIG2_DELTA = [1e-3, PI]

RESULTS = {}


def _families(j):
    yield Noon(0.0)
    yield PhaseState(0.0)
    for m in j.m_values:
        yield FockZ(float(m))


def criterion_1():
    t0 = time.perf_counter()
    worst = 0.0
    for two_j in range(1, 51):
        j = SpinJ(two_j)
        for fam in _families(j):
            v, _ = fisher_curve(make_probe(fam, j), THETAS)
            ref = closed_form_fisher(fam, j).value
            worst = max(worst, float(np.max(np.abs(v - ref)) / ref))
    dt = time.perf_counter() - t0
    return worst < 1e-7 and dt < 10, f"max rel err {worst:.2e}, {dt:.1f} s"


def criterion_2():
    worst, degenerate = 0.0, 0
    for two_j in range(1, 51):
        j = SpinJ(two_j)
        for fam in _families(j):
            probe = make_probe(fam, j)
            a, deg = fisher_curve(probe, THETAS)
            b, _ = energy_discrepancy_curve(probe, THETAS)
            worst = max(worst, float(np.max(np.abs(a - b) / np.abs(b))))
            degenerate += int(np.sum(deg))
    return worst < 1e-7, f"max rel disagreement {worst:.2e}, {degenerate} degenerate outcome terms"


def criterion_3():
    worst = worst_period = 0.0
    for two_j in range(1, 51):
        j = SpinJ(two_j)
        probe = make_probe(Noon(0.0), j)
        pipe = np.abs(get_engine(j).amplitudes(probe.amps, THETAS)) ** 2
        ana = np.array([noon_distribution_analytic(j, 0.0, t).probs for t in THETAS])
        shifted = np.array([noon_distribution_analytic(j, 0.0, t + PI / j.j).probs for t in THETAS])
        worst = max(worst, float(np.max(np.abs(pipe - ana))))
        worst_period = max(worst_period, float(np.max(np.abs(shifted - ana))))
    return worst < 1e-10 and worst_period < 1e-12, f"max abs err {worst:.1e}, period err {worst_period:.1e}"


def criterion_4():
    ok, parts = True, []
    for fam in FIG2_FAMILIES:
        probe = make_probe(fam, SpinJ(10))
        errs = []
        for delta in (1e-2, 1e-3, 1e-4):
            d = disting(DistinguishabilityQuery(probe, PI / 2, delta)).value
            errs.append(abs(d / local_approx(probe, PI / 2, delta) - 1))
        fam_ok = errs[0] > errs[1] > errs[2] and errs[2] < 1e-3
        ok &= fam_ok
        parts.append(f"{fam.label}: " + ", ".join(f"{e:.4f}" for e in errs))
    return ok, "|ratio - 1| at 1e-2, 1e-3, 1e-4: " + "; ".join(parts)


@functools.lru_cache(maxsize=None)
def fig2_sweep():
    t0 = time.perf_counter()
    rows = disting_sweep(list(FIG2_FAMILIES), FIG2_N, FIG2_CHI, FIG2_DELTA)
    return rows, time.perf_counter() - t0


def _series(rows, label, chi, delta):
    pts = sorted((r.n, r.value) for r in rows
                 if r.family == label and r.chi == chi and r.delta == delta and not r.flag)
    return np.array([p[0] for p in pts]), np.array([p[1] for p in pts])


def criterion_5():
    rows, dt = fig2_sweep()
    n, top = _series(rows, FIG2_FAMILIES[2].label, PI, PI)
    keep = (n % 2 == 0) & (n >= 6)
    n, top = n[keep], top[keep]
    _, noon = _series(rows, FIG2_FAMILIES[0].label, PI, PI)
    noon = noon[keep]
    _, phase = _series(rows, FIG2_FAMILIES[3].label, PI, PI)
    phase = phase[keep]
    increasing = bool(np.all(np.diff(top) > 0))
    noon_ratio = noon[-1] / noon[0]
    between = bool(np.all(((phase < top) & (phase > noon))[n >= 10]))
    ok = increasing and 0.5 <= noon_ratio <= 2 and between and dt < 300
    return ok, (f"top increasing {increasing}, noon(50)/noon(6) {noon_ratio:.3f}, "
                f"phase between {between}, sweep {dt:.0f} s")


def criterion_6():
    rows, _ = fig2_sweep()
    ok, parts = True, []
    for chi in FIG2_CHI:
        n, noon = _series(rows, FIG2_FAMILIES[0].label, chi, 1e-3)
        slope = np.polyfit(np.log(n), np.log(noon), 1)[0]
        nf, fock0 = _series(rows, FIG2_FAMILIES[1].label, chi, 1e-3)
        npz, phase = _series(rows, FIG2_FAMILIES[3].label, chi, 1e-3)
        phase = phase[np.isin(npz, nf)]
        x = nf / 2 * (nf / 2 + 1)
        ratio = (phase @ x) / (fock0 @ x)
        chi_ok = abs(slope - 2) <= 0.02 and abs(ratio / (2 / 3) - 1) <= 0.01
        ok &= chi_ok
        parts.append(f"chi={chi:.4f}: slope {slope:.4f}, ratio {ratio:.4f}")
    return ok, "; ".join(parts)


def criterion_7():
    t0 = time.perf_counter()
    probe = make_probe(PhaseState(0.0), SpinJ(10))
    run = mse_experiment(probe, 1.0, (1.0, 0.6), 100, 2000, 12345)
    dt = time.perf_counter() - t0
    ok = run.empirical_mse >= run.crb - 3 * run.mse_stderr and dt < 60
    return ok, f"mse {run.empirical_mse:.3e} +- {run.mse_stderr:.1e}, crb {run.crb:.3e}, {dt:.1f} s"


def criterion_8():
    probe = make_probe(FockZ("+j"), SpinJ(1))
    p1 = distribution(evolve(probe, PI / 2)).probs
    p2 = distribution(evolve(probe, PI / 3)).probs
    s = kl_divergence(p1, p2)
    exps = [-math.log2(exact_binary_misid(p1, p2, k)) / k for k in (100, 200, 400)]
    gaps = [abs(e - s) for e in exps]
    monotone = gaps[0] > gaps[1] > gaps[2]
    worst_z = 0.0
    trials = 200_000
    for k in (10, 20, 100, 200, 400):
        emp, _ = misid_experiment(p1, p2, k, trials, 2024 + k)
        exact = exact_binary_misid(p1, p2, k)
        se = math.sqrt(exact * (1 - exact) / trials)
        z = abs(emp - exact) / se
        worst_z = max(worst_z, z)
    ok = abs(s - 0.2) < 0.05 and monotone and worst_z <= 3
    return ok, (f"S {s:.4f}, exponents " + ", ".join(f"{e:.4f}" for e in exps)
                + f", worst Monte Carlo z {worst_z:.2f}")


def criterion_9():
    rng = np.random.default_rng(20240601)
    worst = -np.inf
    for two_j in range(1, 21):
        j = SpinJ(two_j)
        z = rng.normal(size=(1000, j.dim)) + 1j * rng.normal(size=(1000, j.dim))
        for amps in z:
            v = fisher_prob_derivative(SpinState.normalized(j, amps), 0.37).value
            worst = max(worst, v - 4 * j.j ** 2)
    return worst <= 1e-8, f"max(J - 4j^2) = {worst:.3e}"


def criterion_10():
    rows, _ = fig2_sweep()
    fams = {f.label: f for f in FIG2_FAMILIES}
    worst = 0.0
    for r in rows:
        if r.flag:
            continue
        probe = make_probe(fams[r.family], SpinJ(r.n))
        spec = QuadratureSpec(nodes_per_axis=2 * default_nodes(r.n, r.delta))
        v = disting(DistinguishabilityQuery(probe, r.chi, r.delta, spec)).value
        worst = max(worst, abs(v - r.value) / abs(r.value))
    return worst < 1e-6, f"max rel change {worst:.2e} over {sum(not r.flag for r in rows)} cells"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


def _record(number, fn):
    ok, detail = fn()
    line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[number] = line
    return ok, line


@pytest.mark.parametrize("number", range(1, len(CRITERIA) + 1))
def test_criterion(number):
    ok, line = _record(number, CRITERIA[number - 1])
    print(line)
    assert ok, line


if __name__ == "__main__":
    failed = 0
    for i, fn in enumerate(CRITERIA, 1):
        ok, line = _record(i, fn)
        print(line, flush=True)
        failed += not ok
    sys.exit(1 if failed else 0)
