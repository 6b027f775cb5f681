"""Shared encoding between the compiled and pure python flow kernels.

A model that the kernels can integrate is packed into a small integer kind
plus a flat float64 parameter vector.  Both backends interpret the same
encoding, which keeps parity tests and the benchmark honest.

Kinds and parameter layouts
---------------------------
KIND_UHS     params = [b, s]
    half-space chart, metric s * (dx^2 + dy^2) / (b^2 y^2), y = last coord
KIND_WARPED  params = [bb, omega, s]
    coords (q, t) with q a half-space chart of dim d-1 and scale bb;
    metric s * (cosh(omega t)^2 * g_base(q) + dt^2)
KIND_CONE    params = [k, r0, rho, s, r_eps, r_max]
    coords (r, theta, x...) with fiber x of dim d-2; metric
    s * (dr^2 + sigma(r)^2 dtheta^2 + cosh(r)^2 g_fiber(x));
    sigma is the smoothed profile k^step(u) sinh(r) with the quintic C2
    step on u = (r - r0)/(rho - r0); k = 1 reduces to plain sinh.
    The fiber metric is flat for dim 1 and a half-space chart for dim >= 2.

State vector layout for the bundle ODE (all row-major, flat):
    x (d) | v (d) | E (nf*d) | A (nf*ncol) | B (nf*ncol) | U (nf*nf)
with the E/A+B/U blocks present iff the matching flag bit is set.
"""

from __future__ import annotations

import numpy as np

KIND_UHS = 0
KIND_WARPED = 1
KIND_CONE = 2

FLAG_FRAME = 1
FLAG_JACOBI = 2
FLAG_RICCATI = 4

STATUS_OK = 0
STATUS_EXITED = 1
STATUS_UNDERFLOW = 2

N_PARAMS = {KIND_UHS: 2, KIND_WARPED: 3, KIND_CONE: 6}


def state_size(d: int, nf: int, ncol: int, flags: int) -> int:
    n = 2 * d
    if flags & FLAG_FRAME:
        n += nf * d
    if flags & FLAG_JACOBI:
        n += 2 * nf * ncol
    if flags & FLAG_RICCATI:
        n += nf * nf
    return n


def state_slices(d: int, nf: int, ncol: int, flags: int) -> dict:
    """Slices of the flat state vector for each active block."""
    out = {"x": slice(0, d), "v": slice(d, 2 * d)}
    pos = 2 * d
    if flags & FLAG_FRAME:
        out["E"] = slice(pos, pos + nf * d)
        pos += nf * d
    if flags & FLAG_JACOBI:
        out["A"] = slice(pos, pos + nf * ncol)
        pos += nf * ncol
        out["B"] = slice(pos, pos + nf * ncol)
        pos += nf * ncol
    if flags & FLAG_RICCATI:
        out["U"] = slice(pos, pos + nf * nf)
        pos += nf * nf
    return out


def pack_state(d, nf, ncol, flags, x, v, E=None, A=None, B=None, U=None) -> np.ndarray:
    y = np.zeros(state_size(d, nf, ncol, flags))
    sl = state_slices(d, nf, ncol, flags)
    y[sl["x"]] = x
    y[sl["v"]] = v
    if flags & FLAG_FRAME:
        y[sl["E"]] = np.asarray(E, float).reshape(-1)
    if flags & FLAG_JACOBI:
        y[sl["A"]] = np.asarray(A, float).reshape(-1)
        y[sl["B"]] = np.asarray(B, float).reshape(-1)
    if flags & FLAG_RICCATI:
        y[sl["U"]] = np.asarray(U, float).reshape(-1)
    return y


def unpack_state(d, nf, ncol, flags, y) -> dict:
    sl = state_slices(d, nf, ncol, flags)
    out = {"x": y[sl["x"]].copy(), "v": y[sl["v"]].copy()}
    if flags & FLAG_FRAME:
        out["E"] = y[sl["E"]].reshape(nf, d).copy()
    if flags & FLAG_JACOBI:
        out["A"] = y[sl["A"]].reshape(nf, ncol).copy()
        out["B"] = y[sl["B"]].reshape(nf, ncol).copy()
    if flags & FLAG_RICCATI:
        out["U"] = y[sl["U"]].reshape(nf, nf).copy()
    return out
