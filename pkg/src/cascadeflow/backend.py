"""Kernel selection: compiled extension when built, NumPy reference otherwise.

Set CASCADEFLOW_PURE_PYTHON=1 to force the fallback (used by the benchmark
and by tests that compare the two implementations).
"""

from __future__ import annotations

import os

if os.environ.get("CASCADEFLOW_PURE_PYTHON"):
    from . import _reference as kernel

    BACKEND = "python"
else:
    try:
        from . import _accel as kernel  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        from . import _reference as kernel  # type: ignore[no-redef]

        BACKEND = "python"


def active_backend() -> str:
    """Name of the kernel in use: "compiled" or "python"."""
    return BACKEND
