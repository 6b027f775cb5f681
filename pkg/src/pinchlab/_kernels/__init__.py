"""Backend selection for the flow kernels.

The compiled extension is preferred when present; the pure python module
implements the same functions on the same packed encoding.  Set
PINCHLAB_BACKEND to "python" or "compiled" to force a choice ("compiled"
raises if the extension is missing).
"""

from __future__ import annotations

import os

from . import _pycore
from .params import (  # noqa: F401  (re-exported)
    FLAG_FRAME,
    FLAG_JACOBI,
    FLAG_RICCATI,
    KIND_CONE,
    KIND_UHS,
    KIND_WARPED,
    N_PARAMS,
    STATUS_EXITED,
    STATUS_OK,
    STATUS_UNDERFLOW,
    pack_state,
    state_size,
    state_slices,
    unpack_state,
)

_choice = os.environ.get("PINCHLAB_BACKEND", "auto")
if _choice not in {"auto", "compiled", "python"}:
    raise ImportError(
        f"PINCHLAB_BACKEND must be auto, compiled or python (got {_choice!r})"
    )

def _complete(mod) -> bool:
    return all(
        hasattr(mod, name)
        for name in ("backend_tag", "integrate_bundle", "rhs_eval", "sigma_eval")
    )


if _choice == "python":
    _impl = _pycore
else:
    try:
        from . import _fastcore as _impl  # type: ignore[attr-defined]

        if not _complete(_impl):
            raise ImportError("compiled kernel is incomplete")
    except ImportError:
        if _choice == "compiled":
            raise
        _impl = _pycore

backend_name: str = _impl.backend_tag
integrate_bundle = _impl.integrate_bundle
rhs_eval = _impl.rhs_eval
sigma_eval = _impl.sigma_eval

# pointwise geometry helpers always come from the python module; they are
# cheap per call and shared with the model classes
metric_diag = _pycore.metric_diag
metric_diag_grad = _pycore.metric_diag_grad
metric_diag_hess = _pycore.metric_diag_hess
christoffel = _pycore.christoffel
christoffel_diag = _pycore.christoffel_diag
christoffel_grad_diag = _pycore.christoffel_grad_diag
assemble_riemann = _pycore.assemble_riemann
riemann = _pycore.riemann
in_domain = _pycore.in_domain
