"""Wigner d-matrix elements of exp(i J_y theta) in Jacobi-polynomial form.

Entries are built from sin^a(theta/2) cos^b(theta/2) P_k^(a,b)(cos theta)
with log-gamma prefactors, so they keep full relative accuracy even when
they are many orders of magnitude below one.
"""
from __future__ import annotations

import numpy as np
from scipy.special import eval_jacobi, gammaln, roots_jacobi

from .spin import SpinJ


def _column_params(j: SpinJ, m_in: float):
    """Exponents of the Jacobi form of d_{m', m_in} for every row m'."""
    jj = j.j
    mp = j.m_values
    m = np.full_like(mp, m_in)
    k = np.minimum.reduce([jj + m, jj - m, jj + mp, jj - mp])
    a = np.select([k == jj + m, k == jj - m, k == jj + mp], [mp - m, m - mp, m - mp], mp - m)
    lam = np.select([k == jj + m, k == jj - m, k == jj + mp], [mp - m, 0 * m, 0 * m], mp - m)
    b = 2 * jj - 2 * k - a
    k, a, b, lam = (np.rint(x).astype(int) for x in (k, a, b, lam))
    log_pref = 0.5 * (gammaln(2 * jj - k + 1) - gammaln(k + a + 1) - gammaln(2 * jj - 2 * k - a + 1)
                      - gammaln(k + b + 1) + gammaln(k + 1) + gammaln(b + 1))
    sign = np.where((lam + a) % 2, -1.0, 1.0)
    return k, a, b, log_pref, sign


def log_wigner_d_column(j: SpinJ, m_in: float, thetas, rows=None):
    """log|d_{m', m_in}(theta)| and its sign, for all rows m', without cancellation.

    Uses d = sin^a(theta/2) cos^b(theta/2) P_k^(a,b)(cos theta) times a
    binomial prefactor, so tiny entries near the high-order zeros at
    theta = 0 and pi keep full relative accuracy. Returns two arrays of shape
    (len(thetas), dim), or (len(thetas), len(rows)) when row indices are given.
    """
    j.index(m_in)
    k, a, b, log_pref, sign0 = _column_params(j, m_in)
    if rows is not None:
        rows = np.atleast_1d(rows)
        k, a, b, log_pref, sign0 = k[rows], a[rows], b[rows], log_pref[rows], sign0[rows]
    th = np.atleast_1d(np.asarray(thetas, dtype=float))[:, None]
    s, c = np.sin(th / 2), np.cos(th / 2)
    with np.errstate(divide="ignore", invalid="ignore"):
        poly = eval_jacobi(k, a, b, np.cos(th))
        logabs = (log_pref + np.where(a > 0, a * np.log(np.abs(s)), 0.0)
                  + np.where(b > 0, b * np.log(np.abs(c)), 0.0) + np.log(np.abs(poly)))
    sign = sign0 * np.sign(s) ** a * np.sign(c) ** b * np.sign(poly)
    return logabs, sign


def wigner_d_column(j: SpinJ, m_in: float, thetas) -> np.ndarray:
    logabs, sign = log_wigner_d_column(j, m_in, thetas)
    return sign * np.exp(logabs)


def wigner_d_column_zeros(j: SpinJ, m_in: float, row: int, lo: float, hi: float) -> np.ndarray:
    """Angles in [lo, hi] where d_{m_row, m_in}(theta) vanishes."""
    k, a, b, _, _ = _column_params(j, m_in)
    k, a, b = int(k[row]), int(a[row]), int(b[row])
    base = []
    if a > 0:
        base.append(0.0)
    if b > 0:
        base.append(np.pi)
    if k > 0:
        x = roots_jacobi(k, a, b)[0]
        t = np.arccos(np.clip(x, -1.0, 1.0))
        base.extend(t)
        base.extend(-t)
    base = np.asarray(base, dtype=float)
    if base.size == 0:
        return base
    shifts = 2 * np.pi * np.arange(np.floor((lo - np.pi) / (2 * np.pi)), np.ceil((hi + np.pi) / (2 * np.pi)) + 1)
    z = (base[:, None] + shifts[None, :]).ravel()
    return np.unique(z[(z >= lo) & (z <= hi)])
