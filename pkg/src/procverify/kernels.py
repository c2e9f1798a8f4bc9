"""Kernel selection: the compiled extension when built, else pure Python."""
import os

if os.environ.get("PROCVERIFY_PURE"):
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels as _impl
    except ImportError:  # extension not built
        from . import _kernels_py as _impl

BACKEND = _impl.BACKEND
refine_step = _impl.refine_step
greatest_fixpoint = _impl.greatest_fixpoint
tau_closure = _impl.tau_closure
