"""Finite-difference curvature oracle shared by the test modules.

Everything here is derived from metric evaluations alone, so it is
independent of the closed-form derivative chain inside the package.
Index convention matches the package: riemann[l, k, i, j] is the e_l
component of R(e_i, e_j) e_k, and the sectional curvature of span(u, v)
is <R(u, v) v, u> divided by the Gram determinant.
"""

from __future__ import annotations

import numpy as np


def metric_grad_fd(metric_fn, x, h=1e-5):
    """dg[m, i, j] = d_m g_ij by centered differences of the metric."""
    x = np.asarray(x, float)
    d = x.shape[0]
    out = np.empty((d, d, d))
    for m in range(d):
        e = np.zeros(d)
        e[m] = h
        out[m] = (np.asarray(metric_fn(x + e)) - np.asarray(metric_fn(x - e))) / (2 * h)
    return out


def christoffel_fd(metric_fn, x, h=1e-5):
    x = np.asarray(x, float)
    d = x.shape[0]
    g = np.asarray(metric_fn(x), float)
    ginv = np.linalg.inv(g)
    dg = metric_grad_fd(metric_fn, x, h)
    gamma = np.zeros((d, d, d))
    for k in range(d):
        for i in range(d):
            for j in range(d):
                acc = 0.0
                for l in range(d):
                    acc += ginv[k, l] * (dg[i, l, j] + dg[j, l, i] - dg[l, i, j])
                gamma[k, i, j] = 0.5 * acc
    return gamma


def riemann_fd(metric_fn, x, h_outer=1e-4, h_inner=1e-5):
    """Curvature tensor from metric evaluations only (two difference levels)."""
    x = np.asarray(x, float)
    d = x.shape[0]
    gamma = christoffel_fd(metric_fn, x, h_inner)
    dgamma = np.empty((d, d, d, d))
    for m in range(d):
        e = np.zeros(d)
        e[m] = h_outer
        gp = christoffel_fd(metric_fn, x + e, h_inner)
        gm = christoffel_fd(metric_fn, x - e, h_inner)
        dgamma[m] = (gp - gm) / (2 * h_outer)
    riem = np.zeros((d, d, d, d))
    for l in range(d):
        for k in range(d):
            for i in range(d):
                for j in range(d):
                    acc = dgamma[i, l, j, k] - dgamma[j, l, i, k]
                    for m in range(d):
                        acc += gamma[l, i, m] * gamma[m, j, k]
                        acc -= gamma[l, j, m] * gamma[m, i, k]
                    riem[l, k, i, j] = acc
    return riem


def sectional_fd(metric_fn, x, u, v, h_outer=1e-4, h_inner=1e-5):
    g = np.asarray(metric_fn(x), float)
    riem = riemann_fd(metric_fn, x, h_outer, h_inner)
    w = np.einsum("lkij,i,j,k->l", riem, u, v, v)
    num = float(w @ g @ u)
    gram = float((u @ g @ u) * (v @ g @ v) - (u @ g @ v) ** 2)
    return num / gram


def random_gplane(rng, g, d):
    """A metric-orthonormal random 2-frame, for plane sampling in tests."""
    while True:
        u = rng.standard_normal(d)
        v = rng.standard_normal(d)
        u = u / np.sqrt(u @ g @ u)
        v = v - (v @ g @ u) * u
        nv2 = float(v @ g @ v)
        if nv2 > 1e-8:
            return u, v / np.sqrt(nv2)
