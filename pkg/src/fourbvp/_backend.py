"""Selection of the kernel-assembly backend.

FOURBVP_BACKEND=numba   force the JIT path (ImportError if numba missing)
FOURBVP_BACKEND=numpy   force the vectorized pure-numpy path
unset / auto            numba when importable, numpy otherwise
"""

import os

ENV_VAR = "FOURBVP_BACKEND"


def select_backend() -> str:
    choice = os.environ.get(ENV_VAR, "auto").strip().lower() or "auto"
    if choice == "numpy":
        return "numpy"
    if choice == "numba":
        import numba  # noqa: F401
        return "numba"
    if choice != "auto":
        raise ValueError(
            f"{ENV_VAR}={choice!r} not understood; use 'numba', 'numpy' or 'auto'")
    try:
        import numba  # noqa: F401
        return "numba"
    except ImportError:
        return "numpy"
