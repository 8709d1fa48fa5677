"""Backend selection: compiled kernels when available, pure Python otherwise.

Set ``RELCALC_BACKEND=python`` to force the fallback, or
``RELCALC_BACKEND=compiled`` to fail loudly if the extension is missing.
Both backends produce bit-identical results; selection only affects speed.
"""

from __future__ import annotations

import os

_requested = os.environ.get("RELCALC_BACKEND", "").strip().lower()

if _requested in ("", "compiled"):
    try:
        from . import _kernels as kernel  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        if _requested == "compiled":
            raise
        from . import _pykernels as kernel  # type: ignore[no-redef]

        BACKEND = "python"
elif _requested in ("python", "pure"):
    from . import _pykernels as kernel  # type: ignore[no-redef]

    BACKEND = "python"
else:
    raise RuntimeError(
        f"unknown RELCALC_BACKEND value {_requested!r}; use 'compiled' or 'python'"
    )


def backend_name() -> str:
    """Which kernel implementation this process is using."""
    return BACKEND
