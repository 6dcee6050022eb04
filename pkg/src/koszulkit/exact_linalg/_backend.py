"""Select the compiled kernel when available, the numpy twin otherwise.

Set KOSZULKIT_PURE_PYTHON=1 to force the fallback (used by the benchmark and
by CI to exercise both paths).
"""

from __future__ import annotations

import os

from . import _gfcore_py

if os.environ.get("KOSZULKIT_PURE_PYTHON") == "1":
    _kernel = _gfcore_py
else:
    try:
        from . import _gfcore as _kernel  # type: ignore[no-redef]
    except ImportError:
        _kernel = _gfcore_py

BACKEND = _kernel.BACKEND_NAME


def get_kernel():
    return _kernel
