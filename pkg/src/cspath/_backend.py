"""Kernel backend selection.

``CSPATH_BACKEND`` picks the compute kernels at import time:

* ``auto`` (default) — numba when importable, else the numpy fallback
* ``numba``          — require numba, fail loudly if missing
* ``numpy``          — force the pure-numpy fallback

Both backends expose the same functions and must agree bit for bit on
weights and label sets; ``benchmarks/compare_backends.py`` measures the
speed gap.
"""

import os

_requested = os.environ.get("CSPATH_BACKEND", "auto").strip().lower()
if _requested not in ("auto", "numba", "numpy"):
    raise RuntimeError(
        f"CSPATH_BACKEND must be auto, numba or numpy, got {_requested!r}")

if _requested == "numpy":
    from . import _kernels_numpy as kernels
elif _requested == "numba":
    from . import _kernels_numba as kernels
else:
    try:
        from . import _kernels_numba as kernels
    except ImportError:
        from . import _kernels_numpy as kernels

USING_NUMBA = kernels.NUMBA_BACKEND


def backend_name() -> str:
    return "numba" if USING_NUMBA else "numpy"
