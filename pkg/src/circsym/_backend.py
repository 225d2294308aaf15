"""Selects the implementation of the O(n^2) hot loops.

The environment variable CIRCSYM_BACKEND controls the choice:

* ``auto`` (default): numba when importable, otherwise pure numpy
* ``numba``: require the jit kernels, fail if numba is missing
* ``numpy``: force the pure-numpy fallback

The flag is read once at import time.
"""

import os

_requested = os.environ.get("CIRCSYM_BACKEND", "auto").strip().lower() or "auto"

try:
    import numba  # noqa: F401

    _HAVE_NUMBA = True
except ImportError:
    _HAVE_NUMBA = False

if _requested == "auto":
    BACKEND = "numba" if _HAVE_NUMBA else "numpy"
elif _requested == "numba":
    if not _HAVE_NUMBA:
        raise ImportError("CIRCSYM_BACKEND=numba but numba is not installed")
    BACKEND = "numba"
elif _requested == "numpy":
    BACKEND = "numpy"
else:
    raise ValueError(
        f"CIRCSYM_BACKEND must be 'auto', 'numba' or 'numpy', got {_requested!r}"
    )

USING_NUMBA = BACKEND == "numba"
