"""Backend selection for the hot kernels.

The stencil/right-hand-side kernels exist twice: a numba-compiled loop
version and a vectorized pure-numpy version.  The environment variable
``CONEFLOW_BACKEND`` picks one:

    auto   (default) numba if importable, else numpy
    numba  require numba, fail if unavailable
    numpy  force the pure-numpy path

``benchmarks/bench_backends.py`` times the two against each other.
"""

import os

_CHOICE = os.environ.get("CONEFLOW_BACKEND", "auto").strip().lower()

if _CHOICE not in ("auto", "numba", "numpy"):
    raise RuntimeError(f"CONEFLOW_BACKEND must be auto|numba|numpy, got {_CHOICE!r}")

USING_NUMBA = False
if _CHOICE in ("auto", "numba"):
    try:
        import numba  # noqa: F401
        USING_NUMBA = True
    except ImportError:
        if _CHOICE == "numba":
            raise
        USING_NUMBA = False


def backend_name():
    return "numba" if USING_NUMBA else "numpy"
