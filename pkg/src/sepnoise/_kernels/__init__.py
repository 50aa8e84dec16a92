"""Kernel dispatch: numba-compiled inner loops with a pure-numpy fallback.

The backend is chosen once at import time from the ``SEPNOISE_KERNELS``
environment variable: ``numba`` (require the compiled kernels), ``numpy``
(force the fallback), or ``auto``/unset (numba when importable).  Both
implementations share contracts and are cross-checked in the test suite;
``benchmarks/bench_kernels.py`` compares their throughput.
"""

import os

from . import _numpy as numpy_backend

_requested = os.environ.get("SEPNOISE_KERNELS", "auto").strip().lower() or "auto"

try:
    from . import _numba as numba_backend
except ImportError:
    numba_backend = None

if _requested == "numpy":
    _active = numpy_backend
elif _requested == "numba":
    if numba_backend is None:
        raise ImportError(
            "SEPNOISE_KERNELS=numba was requested but numba is not importable"
        )
    _active = numba_backend
elif _requested == "auto":
    _active = numba_backend if numba_backend is not None else numpy_backend
else:
    raise ValueError(
        f"SEPNOISE_KERNELS must be 'numba', 'numpy' or 'auto', got {_requested!r}"
    )

BACKEND = "numba" if _active is numba_backend else "numpy"

expm_herm = _active.expm_herm
propagator_prefix = _active.propagator_prefix
propagator_prefix_constant = _active.propagator_prefix_constant
rk4_lindblad = _active.rk4_lindblad
rk4_q = _active.rk4_q


def active_backend() -> str:
    """Name of the kernel backend selected at import time."""
    return BACKEND
