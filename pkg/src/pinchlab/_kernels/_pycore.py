"""Pure python (numpy) backend for the flow kernels.

Everything here works on the packed (kind, params) encoding described in
params.py.  The compiled backend mirrors this module function by function;
parity between the two is covered by tests and by the benchmark script.

All metrics handled by the kernels are diagonal in chart coordinates, so the
geometry helpers pass around the diagonal g_jj, its gradient dg[m, j] =
d_m g_jj and its second derivatives ddg[m, i, j] = d_m d_i g_jj.
"""

from __future__ import annotations

import math

import numpy as np

from .params import (
    FLAG_FRAME,
    FLAG_JACOBI,
    FLAG_RICCATI,
    KIND_CONE,
    KIND_UHS,
    KIND_WARPED,
    STATUS_EXITED,
    STATUS_OK,
    STATUS_UNDERFLOW,
    state_slices,
)

backend_tag = "python"


# ---------------------------------------------------------------------------
# smoothed cone profile
# ---------------------------------------------------------------------------

def sigma_eval(k: float, r0: float, rho: float, r: float) -> tuple[float, float, float]:
    """(sigma, sigma', sigma'') of the smoothed profile k^s(u) * sinh(r).

    u = (r - r0)/(rho - r0) clamped to [0, 1]; s is the quintic C2 step.
    k = 1 gives plain sinh for every r.
    """
    a = math.log(k)
    sh, ch = math.sinh(r), math.cosh(r)
    if a == 0.0:
        return sh, ch, sh
    if r <= r0:
        return sh, ch, sh
    if r >= rho:
        return k * sh, k * ch, k * sh
    du = 1.0 / (rho - r0)
    u = (r - r0) * du
    s = u * u * u * (10.0 + u * (-15.0 + 6.0 * u))
    s1 = 30.0 * u * u * (1.0 - u) * (1.0 - u) * du
    s2 = 60.0 * u * (1.0 - u) * (1.0 - 2.0 * u) * du * du
    e = math.exp(a * s)
    val = e * sh
    d1 = e * (a * s1 * sh + ch)
    d2 = e * ((a * s2 + a * a * s1 * s1) * sh + 2.0 * a * s1 * ch + sh)
    return val, d1, d2


# ---------------------------------------------------------------------------
# diagonal metric data per kind
# ---------------------------------------------------------------------------

def in_domain(kind: int, params: np.ndarray, d: int, x: np.ndarray) -> bool:
    if kind == KIND_UHS:
        return x[d - 1] > 0.0
    if kind == KIND_WARPED:
        return x[d - 2] > 0.0
    if kind == KIND_CONE:
        if not (params[4] <= x[0] <= params[5]):
            return False
        return d < 4 or x[d - 1] > 0.0
    raise ValueError(f"unknown kind {kind}")


def metric_diag(kind: int, params: np.ndarray, d: int, x: np.ndarray) -> np.ndarray:
    g = np.empty(d)
    if kind == KIND_UHS:
        b, s = params
        g[:] = s / (b * b * x[d - 1] ** 2)
    elif kind == KIND_WARPED:
        bb, omega, s = params
        w = math.cosh(omega * x[d - 1])
        g[: d - 1] = s * w * w / (bb * bb * x[d - 2] ** 2)
        g[d - 1] = s
    elif kind == KIND_CONE:
        k, r0, rho, s, _, _ = params
        sig, _, _ = sigma_eval(k, r0, rho, x[0])
        ch = math.cosh(x[0])
        g[0] = s
        g[1] = s * sig * sig
        if d > 2:
            fib = 1.0 if d == 3 else 1.0 / x[d - 1] ** 2
            g[2:] = s * ch * ch * fib
    else:
        raise ValueError(f"unknown kind {kind}")
    return g


def metric_diag_grad(kind: int, params: np.ndarray, d: int, x: np.ndarray) -> np.ndarray:
    """dg[m, j] = d_m g_jj."""
    dg = np.zeros((d, d))
    if kind == KIND_UHS:
        b, s = params
        y = x[d - 1]
        dg[d - 1, :] = -2.0 * s / (b * b * y ** 3)
    elif kind == KIND_WARPED:
        bb, omega, s = params
        y, t = x[d - 2], x[d - 1]
        w = math.cosh(omega * t)
        dw2 = 2.0 * omega * math.cosh(omega * t) * math.sinh(omega * t)
        c = s / (bb * bb)
        dg[d - 2, : d - 1] = -2.0 * c * w * w / y ** 3
        dg[d - 1, : d - 1] = c * dw2 / y ** 2
    elif kind == KIND_CONE:
        k, r0, rho, s, _, _ = params
        r = x[0]
        sig, sig1, _ = sigma_eval(k, r0, rho, r)
        ch, sh = math.cosh(r), math.sinh(r)
        dg[0, 1] = 2.0 * s * sig * sig1
        if d > 2:
            fib = 1.0 if d == 3 else 1.0 / x[d - 1] ** 2
            dg[0, 2:] = 2.0 * s * ch * sh * fib
            if d >= 4:
                dg[d - 1, 2:] = -2.0 * s * ch * ch / x[d - 1] ** 3
    else:
        raise ValueError(f"unknown kind {kind}")
    return dg


def metric_diag_hess(kind: int, params: np.ndarray, d: int, x: np.ndarray) -> np.ndarray:
    """ddg[m, i, j] = d_m d_i g_jj."""
    ddg = np.zeros((d, d, d))
    if kind == KIND_UHS:
        b, s = params
        y = x[d - 1]
        ddg[d - 1, d - 1, :] = 6.0 * s / (b * b * y ** 4)
    elif kind == KIND_WARPED:
        bb, omega, s = params
        y, t = x[d - 2], x[d - 1]
        w = math.cosh(omega * t)
        sh = math.sinh(omega * t)
        dw2 = 2.0 * omega * w * sh
        d2w2 = 2.0 * omega * omega * (sh * sh + w * w)
        c = s / (bb * bb)
        hb, tt = d - 2, d - 1
        ddg[hb, hb, : d - 1] = 6.0 * c * w * w / y ** 4
        ddg[hb, tt, : d - 1] = -2.0 * c * dw2 / y ** 3
        ddg[tt, hb, : d - 1] = -2.0 * c * dw2 / y ** 3
        ddg[tt, tt, : d - 1] = c * d2w2 / y ** 2
    elif kind == KIND_CONE:
        k, r0, rho, s, _, _ = params
        r = x[0]
        sig, sig1, sig2 = sigma_eval(k, r0, rho, r)
        ch, sh = math.cosh(r), math.sinh(r)
        ddg[0, 0, 1] = 2.0 * s * (sig1 * sig1 + sig * sig2)
        if d > 2:
            fib = 1.0 if d == 3 else 1.0 / x[d - 1] ** 2
            ddg[0, 0, 2:] = 2.0 * s * (sh * sh + ch * ch) * fib
            if d >= 4:
                yf = x[d - 1]
                ddg[0, d - 1, 2:] = -4.0 * s * ch * sh / yf ** 3
                ddg[d - 1, 0, 2:] = -4.0 * s * ch * sh / yf ** 3
                ddg[d - 1, d - 1, 2:] = 6.0 * s * ch * ch / yf ** 4
    else:
        raise ValueError(f"unknown kind {kind}")
    return ddg


# ---------------------------------------------------------------------------
# connection and curvature from the diagonal data
# ---------------------------------------------------------------------------

def christoffel_diag(g: np.ndarray, dg: np.ndarray) -> np.ndarray:
    """Gamma[k, i, j] for a diagonal metric."""
    d = g.shape[0]
    eye = np.eye(d)
    num = (
        np.einsum("ki,jk->kij", eye, dg)
        + np.einsum("kj,ik->kij", eye, dg)
        - np.einsum("ij,ki->kij", eye, dg)
    )
    return num / (2.0 * g)[:, None, None]


def christoffel_grad_diag(g, dg, ddg, gamma) -> np.ndarray:
    """dGamma[m, k, i, j] = d_m Gamma[k, i, j]."""
    d = g.shape[0]
    eye = np.eye(d)
    num = (
        np.einsum("ki,mjk->mkij", eye, ddg)
        + np.einsum("kj,mik->mkij", eye, ddg)
        - np.einsum("ij,mki->mkij", eye, ddg)
    )
    out = num / (2.0 * g)[None, :, None, None]
    out -= np.einsum("kij,mk->mkij", gamma, dg / g[None, :])
    return out


def assemble_riemann(gamma: np.ndarray, dgamma: np.ndarray) -> np.ndarray:
    """R[l, k, i, j] so that R(e_i, e_j) e_k = R[l, k, i, j] e_l."""
    quad = np.einsum("lim,mjk->lkij", gamma, gamma)
    return (
        np.einsum("iljk->lkij", dgamma)
        - np.einsum("jlik->lkij", dgamma)
        + quad
        - np.einsum("lkji->lkij", quad)
    )


def riemann(kind, params, d, x) -> np.ndarray:
    g = metric_diag(kind, params, d, x)
    dg = metric_diag_grad(kind, params, d, x)
    ddg = metric_diag_hess(kind, params, d, x)
    gamma = christoffel_diag(g, dg)
    return assemble_riemann(gamma, christoffel_grad_diag(g, dg, ddg, gamma))


def christoffel(kind, params, d, x) -> np.ndarray:
    g = metric_diag(kind, params, d, x)
    dg = metric_diag_grad(kind, params, d, x)
    return christoffel_diag(g, dg)


# ---------------------------------------------------------------------------
# bundle ODE right-hand side
# ---------------------------------------------------------------------------

def rhs_eval(kind, params, d, nf, ncol, flags, y) -> np.ndarray:
    x = y[:d]
    v = y[d : 2 * d]
    g = metric_diag(kind, params, d, x)
    dg = metric_diag_grad(kind, params, d, x)
    gamma = christoffel_diag(g, dg)

    dy = np.empty_like(y)
    dy[:d] = v
    dy[d : 2 * d] = -np.einsum("kij,i,j->k", gamma, v, v)

    sl = state_slices(d, nf, ncol, flags)
    need_curv = flags & (FLAG_JACOBI | FLAG_RICCATI)
    if flags & FLAG_FRAME:
        E = y[sl["E"]].reshape(nf, d)
        dy[sl["E"]] = (-np.einsum("kij,i,aj->ak", gamma, v, E)).reshape(-1)
        if need_curv:
            ddg = metric_diag_hess(kind, params, d, x)
            riem = assemble_riemann(
                gamma, christoffel_grad_diag(g, dg, ddg, gamma)
            )
            w = np.einsum("lkij,k,ai,j->la", riem, v, E, v)
            rmat = np.einsum("la,l,bl->ab", w, g, E)
            rmat = 0.5 * (rmat + rmat.T)
            if flags & FLAG_JACOBI:
                A = y[sl["A"]].reshape(nf, ncol)
                B = y[sl["B"]].reshape(nf, ncol)
                dy[sl["A"]] = B.reshape(-1)
                dy[sl["B"]] = (-rmat @ A).reshape(-1)
            if flags & FLAG_RICCATI:
                U = y[sl["U"]].reshape(nf, nf)
                dy[sl["U"]] = (-U @ U - rmat).reshape(-1)
    elif need_curv:
        raise ValueError("jacobi/riccati blocks require the frame block")
    return dy


# ---------------------------------------------------------------------------
# embedded Dormand-Prince 4(5) integrator with eval-point clamping
# ---------------------------------------------------------------------------

_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    np.array([]),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
    np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]),
]
_E = np.array(
    [71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40]
)

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 10.0


def _rms(v: np.ndarray) -> float:
    if v.size == 0:
        return 0.0
    return float(np.sqrt(np.mean(v * v)))


def _initial_step(fun, y0, f0, direction, rtol, atol, h_max):
    scale = atol + rtol * np.abs(y0)
    d0 = _rms(y0 / scale)
    d1 = _rms(f0 / scale)
    h0 = 1e-6 if (d0 < 1e-5 or d1 < 1e-5) else 0.01 * d0 / d1
    h0 = min(h0, h_max)
    f1 = fun(y0 + h0 * direction * f0)
    if not np.all(np.isfinite(f1)):
        return min(1e-6, h_max)
    d2 = _rms((f1 - f0) / scale) / h0
    if d1 <= 1e-15 and d2 <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.2
    return min(100 * h0, h1, h_max)


def integrate_bundle(kind, params, d, nf, ncol, flags, y0, t0, t1,
                     rtol, atol, t_eval, max_steps=1_000_000):
    """Integrate the bundle ODE from t0 to t1 recording at t_eval points.

    t_eval must be monotone in the direction of integration and contained
    in [t0, t1] (inclusive).  The integrator clamps steps so that every
    requested time is hit exactly; there is no dense interpolation.

    Returns (status, n_valid, Y, t_reached, y_last, n_steps, n_rhs) where
    Y has one row per t_eval entry and rows past n_valid are NaN.
    """
    params = np.asarray(params, float)
    y = np.array(y0, float)
    t_eval = np.asarray(t_eval, float)
    n_eval = t_eval.shape[0]
    Y = np.full((n_eval, y.shape[0]), np.nan)
    n_rhs = 0

    def fun(yy):
        nonlocal n_rhs
        n_rhs += 1
        return rhs_eval(kind, params, d, nf, ncol, flags, yy)

    ie = 0
    t = t0
    while ie < n_eval and t_eval[ie] == t0:
        Y[ie] = y
        ie += 1
    if t1 == t0:
        return STATUS_OK, ie, Y, t, y, 0, 0

    direction = 1.0 if t1 >= t0 else -1.0
    span = abs(t1 - t0)
    with np.errstate(all="ignore"):
        f = fun(y)
        h = _initial_step(fun, y, f, direction, rtol, atol, span)
        n_steps = 0
        K = np.empty((7, y.shape[0]))

        while True:
            if t == t1:
                while ie < n_eval:  # trailing eval points equal to t1
                    Y[ie] = y
                    ie += 1
                return STATUS_OK, ie, Y, t, y, n_steps, n_rhs
            if n_steps >= max_steps:
                return STATUS_UNDERFLOW, ie, Y, t, y, n_steps, n_rhs

            # clamp to the next stop (eval point or final time)
            stop = t_eval[ie] if ie < n_eval else t1
            h = min(h, abs(stop - t))
            if h < 1e-13 * max(1.0, abs(t)):
                return STATUS_UNDERFLOW, ie, Y, t, y, n_steps, n_rhs
            h_signed = direction * h

            K[0] = f
            ok = True
            for s in range(1, 7):
                ys = y + h_signed * (_A[s] @ K[:s])
                K[s] = fun(ys)
                if not np.all(np.isfinite(K[s])):
                    ok = False
                    break
            if ok:
                y_new = ys  # stage 7 node is the 5th order solution (FSAL)
                err = h_signed * (_E @ K)
                scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
                err_norm = _rms(err / scale)
            else:
                err_norm = math.inf
            n_steps += 1

            if err_norm <= 1.0:
                t_new = stop if abs(stop - t) == h else t + h_signed
                if not in_domain(kind, params, d, y_new[:d]):
                    return STATUS_EXITED, ie, Y, t, y, n_steps, n_rhs
                t, y, f = t_new, y_new, K[6]
                while ie < n_eval and t_eval[ie] == t:
                    Y[ie] = y
                    ie += 1
                if err_norm == 0.0:
                    factor = _MAX_FACTOR
                else:
                    factor = min(_MAX_FACTOR, _SAFETY * err_norm ** -0.2)
                h = h * max(_MIN_FACTOR, factor)
            else:
                if math.isinf(err_norm):
                    h *= _MIN_FACTOR
                else:
                    h *= max(_MIN_FACTOR, _SAFETY * err_norm ** -0.2)
