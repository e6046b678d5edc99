"""Select the kernel implementation at import time.

The compiled ``_kernels`` extension is preferred. Setting the environment
variable ``PERMEST_BACKEND=python`` forces the pure-Python fallback.
"""
import logging
import os

logger = logging.getLogger(__name__)

_requested = os.environ.get("PERMEST_BACKEND", "auto").lower()

if _requested == "python":
    from . import _fallback as kernels
    BACKEND = "python"
else:
    try:
        from . import _kernels as kernels
        BACKEND = "cython"
    except ImportError:
        if _requested == "cython":
            raise
        logger.debug("compiled kernels unavailable, using pure-Python fallback")
        from . import _fallback as kernels
        BACKEND = "python"

__all__ = ["kernels", "BACKEND"]
