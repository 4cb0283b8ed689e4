"""Select the compiled kernels when available, the numpy ones otherwise.

Setting ``COMMONEIG_BACKEND=python`` forces the numpy kernels.
"""

import os

if os.environ.get("COMMONEIG_BACKEND", "").lower() == "python":
    from . import _fallback as kernels

    BACKEND = "python"
else:
    try:
        from . import _kernels as kernels

        BACKEND = "cython"
    except ImportError:  # extension not built
        from . import _fallback as kernels

        BACKEND = "python"

__all__ = ["kernels", "BACKEND"]
