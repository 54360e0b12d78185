"""Backend dispatch for the hot kernels.

``RRT_LAB_BACKEND`` selects the implementation:

* ``auto`` (default): numba if importable, else pure numpy;
* ``numba``: require the compiled kernels (ImportError if numba is missing);
* ``numpy``: force the pure-numpy fallback.

The flag is read once at import time.  Both implementation modules stay
importable directly (``rrt_lab.kernels.numba_impl`` / ``numpy_impl``) for
benchmarks and cross-backend tests.
"""
from __future__ import annotations

import os

from ..errors import ConfigurationError
from . import numpy_impl

_choice = os.environ.get("RRT_LAB_BACKEND", "auto").strip().lower()
if _choice not in ("auto", "numba", "numpy"):
    raise ConfigurationError(
        f"RRT_LAB_BACKEND must be auto, numba or numpy, got {_choice!r}")

if _choice == "numpy":
    _impl = numpy_impl
else:
    try:
        from . import numba_impl as _impl
    except ImportError:
        if _choice == "numba":
            raise
        _impl = numpy_impl

BACKEND = _impl.BACKEND_NAME

logaddexp_accumulate = _impl.logaddexp_accumulate
grow_parents = _impl.grow_parents
poisson_binomial_pmf = _impl.poisson_binomial_pmf
depths_from_parents = _impl.depths_from_parents


def warmup() -> None:
    """Trigger JIT compilation (no-op on the numpy backend)."""
    import numpy as np

    lw = np.array([0.0, -0.5, 0.25])
    logaddexp_accumulate(lw)
    grow_parents(lw, np.array([0.3, 0.9]), 300.0)
    poisson_binomial_pmf(np.array([0.5, 0.25]))
    depths_from_parents(np.array([-1, 0, 1]), np.array([0.0, 1.0, 1.0]))
