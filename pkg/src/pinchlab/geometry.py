"""Model geometries and pointwise curvature operations.

Three chart families are implemented, all with diagonal metrics in their
coordinates:

* ``UpperHalfSpace(dim, b)``: half-space chart with metric
  (dx^2 + dy^2)/(b^2 y^2), constant curvature -b^2.
* ``WarpedSlice(base, warp)``: coordinates (q, t) with metric
  warp(t)^2 * g_base(q) + dt^2 over a half-space base.  The zero slice
  t = 0 is totally geodesic.
* ``ConeChart(fiber_dim, sigma, r_max, r_eps)``: coordinates
  (r, theta, x) with metric dr^2 + sigma(r)^2 dtheta^2 + cosh(r)^2 g_f(x)
  where the fiber carries a flat line (dim 1) or a half-space chart
  (dim >= 2).  sigma = sinh gives constant curvature -1.

Christoffel symbols, their coordinate derivatives and the curvature tensor
come from closed-form derivatives of the diagonal metric data.  A centered
finite-difference fallback (step 1e-5) covers models that only provide a
metric callable.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from ._kernels import (
    KIND_CONE,
    KIND_UHS,
    KIND_WARPED,
    assemble_riemann,
    christoffel_diag,
    christoffel_grad_diag,
)
from .errors import ConfigError, DegeneratePlaneError, DomainError
from .functions import CoshWarp, GTProfile, SinhProfile, Smooth1D

FD_STEP = 1e-5
GRAM_FLOOR = 1e-12


# ---------------------------------------------------------------------------
# points, vectors, planes
# ---------------------------------------------------------------------------

def as_coords(p) -> np.ndarray:
    """Accept a Point, a TangentVector base, or a bare coordinate array."""
    if isinstance(p, Point):
        return p.coords
    return np.asarray(p, float)


@dataclass(frozen=True)
class Point:
    """A point in a single chart, stored as its coordinate vector."""

    coords: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coords", np.asarray(self.coords, float))

    @property
    def dim(self) -> int:
        return self.coords.shape[0]


@dataclass(frozen=True)
class TangentVector:
    base: Point
    components: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "base", Point(as_coords(self.base)))
        object.__setattr__(
            self, "components", np.asarray(self.components, float)
        )
        if self.components.shape != self.base.coords.shape:
            raise ValueError("vector components must match the base point dim")


@dataclass(frozen=True)
class TangentPlane:
    """A 2-plane spanned by two tangent vectors at a common base point."""

    base: Point
    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "base", Point(as_coords(self.base)))
        object.__setattr__(self, "u", np.asarray(self.u, float))
        object.__setattr__(self, "v", np.asarray(self.v, float))


# ---------------------------------------------------------------------------
# models
# ---------------------------------------------------------------------------

class MetricModel:
    """Base class: a single chart with a Riemannian metric."""

    dim: int

    # -- domain ------------------------------------------------------------
    def in_domain(self, x: np.ndarray) -> bool:
        raise NotImplementedError

    def check_point(self, x) -> np.ndarray:
        x = as_coords(x)
        if x.shape != (self.dim,):
            raise DomainError(
                f"expected {self.dim} coordinates, got shape {x.shape}"
            )
        if not np.all(np.isfinite(x)) or not self.in_domain(x):
            raise DomainError(f"point {x.tolist()} outside chart domain")
        return x

    # -- metric data ---------------------------------------------------------
    def diag_data(self, x: np.ndarray):
        """(g, dg, ddg) with g the metric diagonal, dg[m,j] = d_m g_jj and
        ddg[m,i,j] = d_m d_i g_jj.  None for non-diagonal models."""
        return None

    def metric(self, x: np.ndarray) -> np.ndarray:
        data = self.diag_data(x)
        if data is None:
            raise NotImplementedError
        return np.diag(data[0])

    def christoffel(self, x: np.ndarray) -> np.ndarray:
        g, dg, _ = self.diag_data(x)
        return christoffel_diag(g, dg)

    def christoffel_grad(self, x: np.ndarray) -> np.ndarray:
        g, dg, ddg = self.diag_data(x)
        return christoffel_grad_diag(g, dg, ddg, christoffel_diag(g, dg))

    def riemann(self, x: np.ndarray) -> np.ndarray:
        g, dg, ddg = self.diag_data(x)
        gamma = christoffel_diag(g, dg)
        return assemble_riemann(gamma, christoffel_grad_diag(g, dg, ddg, gamma))

    # -- misc ----------------------------------------------------------------
    def pack(self):
        """(kind, params) for the flow kernels, or None if unsupported."""
        return None

    def scaled(self, factor: float) -> "ScaledModel":
        return ScaledModel(self, factor)

    def norm(self, x: np.ndarray, w: np.ndarray) -> float:
        g = self.metric(x)
        return math.sqrt(max(0.0, float(w @ g @ w)))


@dataclass(frozen=True)
class UpperHalfSpace(MetricModel):
    """Half-space chart of the constant-curvature -b^2 space."""

    dim: int
    b: float = 1.0

    def __post_init__(self):
        if self.dim < 2:
            raise ValueError("half-space chart needs dim >= 2")
        if not (self.b > 0.0 and math.isfinite(self.b)):
            raise ValueError(f"curvature scale b must be positive, got {self.b}")

    def in_domain(self, x) -> bool:
        return x[self.dim - 1] > 0.0

    def diag_data(self, x):
        d, b = self.dim, self.b
        y = x[d - 1]
        g = np.full(d, 1.0 / (b * b * y * y))
        dg = np.zeros((d, d))
        dg[d - 1, :] = -2.0 / (b * b * y ** 3)
        ddg = np.zeros((d, d, d))
        ddg[d - 1, d - 1, :] = 6.0 / (b * b * y ** 4)
        return g, dg, ddg

    def pack(self):
        return KIND_UHS, np.array([self.b, 1.0])


@dataclass(frozen=True)
class WarpedSlice(MetricModel):
    """Warped line over a half-space base: warp(t)^2 * g_base + dt^2."""

    base: UpperHalfSpace
    warp: Smooth1D

    def __post_init__(self):
        if not isinstance(self.base, UpperHalfSpace):
            raise ValueError("warped slices are built over a half-space base")

    @property
    def dim(self) -> int:
        return self.base.dim + 1

    def in_domain(self, x) -> bool:
        return x[self.dim - 2] > 0.0

    def diag_data(self, x):
        d = self.dim
        nb = d - 1
        bb = self.base.b
        y, t = x[d - 2], x[d - 1]
        w, w1, w2 = self.warp.eval_all(t)
        W2 = w * w
        dW2 = 2.0 * w * w1
        d2W2 = 2.0 * (w1 * w1 + w * w2)
        c = 1.0 / (bb * bb)

        g = np.empty(d)
        g[:nb] = c * W2 / (y * y)
        g[nb] = 1.0
        dg = np.zeros((d, d))
        dg[d - 2, :nb] = -2.0 * c * W2 / y ** 3
        dg[d - 1, :nb] = c * dW2 / (y * y)
        ddg = np.zeros((d, d, d))
        ddg[d - 2, d - 2, :nb] = 6.0 * c * W2 / y ** 4
        ddg[d - 2, d - 1, :nb] = -2.0 * c * dW2 / y ** 3
        ddg[d - 1, d - 2, :nb] = -2.0 * c * dW2 / y ** 3
        ddg[d - 1, d - 1, :nb] = c * d2W2 / (y * y)
        return g, dg, ddg

    def pack(self):
        if isinstance(self.warp, CoshWarp):
            return KIND_WARPED, np.array([self.base.b, self.warp.rate, 1.0])
        return None


@dataclass(frozen=True)
class ConeChart(MetricModel):
    """Cone-style chart dr^2 + sigma(r)^2 dtheta^2 + cosh(r)^2 g_fiber."""

    fiber_dim: int
    sigma: Smooth1D
    r_max: float = 50.0
    r_eps: float = 1e-3

    def __post_init__(self):
        if self.fiber_dim < 0:
            raise ValueError("fiber_dim must be >= 0")
        if not (0.0 < self.r_eps < self.r_max):
            raise ValueError("need 0 < r_eps < r_max")

    @property
    def dim(self) -> int:
        return 2 + self.fiber_dim

    def in_domain(self, x) -> bool:
        if not (self.r_eps <= x[0] <= self.r_max):
            return False
        return self.fiber_dim < 2 or x[self.dim - 1] > 0.0

    def diag_data(self, x):
        d = self.dim
        r = x[0]
        sig, sig1, sig2 = self.sigma.eval_all(r)
        ch, sh = math.cosh(r), math.sinh(r)

        g = np.empty(d)
        g[0] = 1.0
        g[1] = sig * sig
        dg = np.zeros((d, d))
        dg[0, 1] = 2.0 * sig * sig1
        ddg = np.zeros((d, d, d))
        ddg[0, 0, 1] = 2.0 * (sig1 * sig1 + sig * sig2)
        if d > 2:
            if self.fiber_dim == 1:
                fib = 1.0
            else:
                yf = x[d - 1]
                fib = 1.0 / (yf * yf)
            g[2:] = ch * ch * fib
            dg[0, 2:] = 2.0 * ch * sh * fib
            ddg[0, 0, 2:] = 2.0 * (sh * sh + ch * ch) * fib
            if self.fiber_dim >= 2:
                yf = x[d - 1]
                dg[d - 1, 2:] = -2.0 * ch * ch / yf ** 3
                ddg[0, d - 1, 2:] = -4.0 * ch * sh / yf ** 3
                ddg[d - 1, 0, 2:] = -4.0 * ch * sh / yf ** 3
                ddg[d - 1, d - 1, 2:] = 6.0 * ch * ch / yf ** 4
        return g, dg, ddg

    def pack(self):
        if isinstance(self.sigma, GTProfile):
            k, r0, rho = self.sigma.k, self.sigma.r0, self.sigma.rho
        elif isinstance(self.sigma, SinhProfile):
            k, r0, rho = 1.0, 1.0, 2.0
        else:
            return None
        return KIND_CONE, np.array([k, r0, rho, 1.0, self.r_eps, self.r_max])


@dataclass(frozen=True)
class ScaledModel(MetricModel):
    """The same chart with the metric multiplied by a constant factor.

    Christoffel symbols and the (1,3) curvature tensor are unchanged;
    sectional curvatures divide by the factor.
    """

    inner: MetricModel
    factor: float

    def __post_init__(self):
        if not (self.factor > 0.0 and math.isfinite(self.factor)):
            raise ValueError(f"scale factor must be positive, got {self.factor}")

    @property
    def dim(self) -> int:
        return self.inner.dim

    def in_domain(self, x) -> bool:
        return self.inner.in_domain(x)

    def diag_data(self, x):
        data = self.inner.diag_data(x)
        if data is None:
            return None
        g, dg, ddg = data
        f = self.factor
        return f * g, f * dg, f * ddg

    def metric(self, x):
        return self.factor * self.inner.metric(x)

    def christoffel(self, x):
        return self.inner.christoffel(x)

    def christoffel_grad(self, x):
        return self.inner.christoffel_grad(x)

    def riemann(self, x):
        return self.inner.riemann(x)

    def pack(self):
        packed = self.inner.pack()
        if packed is None:
            return None
        kind, params = packed
        params = params.copy()
        scale_slot = {KIND_UHS: 1, KIND_WARPED: 2, KIND_CONE: 3}[kind]
        params[scale_slot] *= self.factor
        return kind, params


class CustomMetricModel(MetricModel):
    """Metric given as a plain callable; derivatives via finite differences.

    Meant for test doubles and experiments, not for flow integration.
    """

    def __init__(self, dim, metric_fn, domain_fn=None):
        self.dim = dim
        self.metric_fn = metric_fn
        self.domain_fn = domain_fn

    def in_domain(self, x) -> bool:
        return True if self.domain_fn is None else bool(self.domain_fn(x))

    def metric(self, x):
        return np.asarray(self.metric_fn(np.asarray(x, float)), float)

    def christoffel(self, x):
        return christoffel_from_metric_fd(self.metric, x)

    def christoffel_grad(self, x):
        return fd_grad_of(self.christoffel, x)

    def riemann(self, x):
        return assemble_riemann(self.christoffel(x), self.christoffel_grad(x))


# ---------------------------------------------------------------------------
# finite-difference fallbacks
# ---------------------------------------------------------------------------

def fd_grad_of(fn, x, h: float = FD_STEP) -> np.ndarray:
    """Centered difference of an array-valued function of coordinates.

    Output axis 0 is the derivative direction.
    """
    x = np.asarray(x, float)
    rows = []
    for m in range(x.shape[0]):
        e = np.zeros_like(x)
        e[m] = h
        rows.append((np.asarray(fn(x + e)) - np.asarray(fn(x - e))) / (2.0 * h))
    return np.stack(rows, axis=0)


def christoffel_from_metric_fd(metric_fn, x, h: float = FD_STEP) -> np.ndarray:
    """Standard symbols from a metric callable via centered differences."""
    x = np.asarray(x, float)
    g = np.asarray(metric_fn(x), float)
    ginv = np.linalg.inv(g)
    dg = fd_grad_of(metric_fn, x, h)  # dg[m, i, j] = d_m g_ij
    t = (
        np.einsum("ilj->lij", dg)
        + np.einsum("jli->lij", dg)
        - dg
    )
    return 0.5 * np.einsum("kl,lij->kij", ginv, t)


# ---------------------------------------------------------------------------
# pointwise operations
# ---------------------------------------------------------------------------

def metric_at(model: MetricModel, p) -> np.ndarray:
    """Metric matrix at a point; raises DomainError off the chart."""
    x = model.check_point(p)
    g = model.metric(x)
    if not np.allclose(g, g.T, rtol=1e-12, atol=0.0):
        raise DomainError("metric is not symmetric at this point")
    try:
        np.linalg.cholesky(g)
    except np.linalg.LinAlgError:
        raise DomainError("metric is not positive definite at this point")
    return g


def christoffel_at(model: MetricModel, p) -> np.ndarray:
    x = model.check_point(p)
    return model.christoffel(x)


def sectional_from_tensors(riem, g, u, v) -> float:
    """Plane curvature from a precomputed curvature tensor and metric."""
    w = np.einsum("lkij,i,j,k->l", riem, u, v, v)
    num = float(w @ g @ u)
    uu = float(u @ g @ u)
    vv = float(v @ g @ v)
    uv = float(u @ g @ v)
    gram = uu * vv - uv * uv
    if gram <= GRAM_FLOOR:
        raise DegeneratePlaneError(
            f"gram determinant {gram:.3e} at or below {GRAM_FLOOR:.0e}"
        )
    return num / gram


def sectional_curvature(model: MetricModel, plane: TangentPlane) -> float:
    x = model.check_point(plane.base)
    return sectional_from_tensors(
        model.riemann(x), model.metric(x), plane.u, plane.v
    )


# ---------------------------------------------------------------------------
# curvature range scan
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GridSpec:
    """Cartesian grid: one coordinate array per chart axis."""

    axes: tuple
    n_random_planes: int = 8
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(
            self, "axes", tuple(np.asarray(a, float) for a in self.axes)
        )
        if any(a.size == 0 for a in self.axes):
            raise ConfigError("grid axes must be nonempty")

    def points(self):
        for combo in itertools.product(*self.axes):
            yield np.array(combo)

    @property
    def n_points(self) -> int:
        n = 1
        for a in self.axes:
            n *= a.size
        return n


@dataclass
class CurvatureScan:
    kappa_min: float
    kappa_max: float
    argmin_point: np.ndarray
    argmin_plane: tuple
    argmax_point: np.ndarray
    argmax_plane: tuple
    n_points: int
    plane_table: dict = field(default_factory=dict)
    samples: list = field(default_factory=list)


def _random_plane(rng, g, d):
    for _ in range(16):
        u = rng.standard_normal(d)
        v = rng.standard_normal(d)
        nu = math.sqrt(float(u @ g @ u))
        if nu <= 0.0:
            continue
        u = u / nu
        v = v - float(v @ g @ u) * u
        nv2 = float(v @ g @ v)
        if nv2 > 1e-10:
            return u, v / math.sqrt(nv2)
    raise DegeneratePlaneError("could not draw a nondegenerate random plane")


def curvature_range_scan(model: MetricModel, grid: GridSpec) -> CurvatureScan:
    """Extremes of sectional curvature over a grid of points and planes.

    Every coordinate 2-plane is evaluated at every grid point, plus
    ``grid.n_random_planes`` random metric-orthonormal planes per point
    drawn from a generator seeded by ``grid.seed``.  Deterministic for a
    fixed spec.
    """
    d = model.dim
    if len(grid.axes) != d:
        raise ConfigError(f"grid has {len(grid.axes)} axes, model needs {d}")
    rng = np.random.default_rng(grid.seed)
    coord_pairs = list(itertools.combinations(range(d), 2))

    best_min = math.inf
    best_max = -math.inf
    arg_min = arg_max = None
    table: dict = {}
    samples = []
    n_points = 0

    for x in grid.points():
        model.check_point(x)
        g = model.metric(x)
        riem = model.riemann(x)
        n_points += 1

        planes = []
        for i, j in coord_pairs:
            u = np.zeros(d)
            v = np.zeros(d)
            u[i] = 1.0
            v[j] = 1.0
            planes.append((f"c{i}{j}", u, v))
        for _ in range(grid.n_random_planes):
            u, v = _random_plane(rng, g, d)
            planes.append(("random", u, v))

        for label, u, v in planes:
            kappa = sectional_from_tensors(riem, g, u, v)
            samples.append((x.copy(), label, kappa))
            lo, hi = table.get(label, (math.inf, -math.inf))
            table[label] = (min(lo, kappa), max(hi, kappa))
            if kappa < best_min:
                best_min, arg_min = kappa, (x.copy(), (u.copy(), v.copy()))
            if kappa > best_max:
                best_max, arg_max = kappa, (x.copy(), (u.copy(), v.copy()))

    if n_points == 0:
        raise ConfigError("curvature scan over an empty grid")
    return CurvatureScan(
        kappa_min=best_min,
        kappa_max=best_max,
        argmin_point=arg_min[0],
        argmin_plane=arg_min[1],
        argmax_point=arg_max[0],
        argmax_plane=arg_max[1],
        n_points=n_points,
        plane_table=table,
        samples=samples,
    )
