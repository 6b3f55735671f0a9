"""Runtime switches.

``BLASCHKE_DYN_NUMBA=0`` forces the pure-numpy kernels even when numba is
importable. Read once at import time.
"""

import os

ENV_FLAG = "BLASCHKE_DYN_NUMBA"


def _numba_requested():
    value = os.environ.get(ENV_FLAG, "1").strip().lower()
    return value not in ("0", "false", "no", "off")


try:
    import numba  # noqa: F401

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and _numba_requested()
