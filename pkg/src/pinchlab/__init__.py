"""pinchlab: numerical laboratory for pinched negatively curved model geometries."""

from ._kernels import backend_name
from .errors import (
    ConfigError,
    ConvergenceError,
    DegeneratePlaneError,
    DomainError,
    IntegrationError,
    NumericalError,
    PinchlabError,
    ScanError,
    ValidationError,
)
from .functions import ConstantProfile, CoshWarp, GTProfile, SinhProfile, Smooth1D
from .geometry import (
    ConeChart,
    CurvatureScan,
    CustomMetricModel,
    GridSpec,
    MetricModel,
    Point,
    ScaledModel,
    TangentPlane,
    TangentVector,
    UpperHalfSpace,
    WarpedSlice,
    christoffel_at,
    curvature_range_scan,
    metric_at,
    sectional_curvature,
)

__version__ = "0.1.0"

__all__ = [
    "backend_name",
    "__version__",
    # errors
    "PinchlabError",
    "ConfigError",
    "DomainError",
    "DegeneratePlaneError",
    "IntegrationError",
    "ConvergenceError",
    "NumericalError",
    "ScanError",
    "ValidationError",
    # profiles
    "Smooth1D",
    "SinhProfile",
    "CoshWarp",
    "ConstantProfile",
    "GTProfile",
    # geometry
    "Point",
    "TangentVector",
    "TangentPlane",
    "MetricModel",
    "UpperHalfSpace",
    "WarpedSlice",
    "ConeChart",
    "ScaledModel",
    "CustomMetricModel",
    "GridSpec",
    "CurvatureScan",
    "metric_at",
    "christoffel_at",
    "sectional_curvature",
    "curvature_range_scan",
]
