"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the numpy fallback.
Set ``PCL_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels
if not os.environ.get("PCL_PURE_PYTHON"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        pass

sieve = _impl.sieve
hooley_sums = _impl.hooley_sums
divisor_convolution = _impl.divisor_convolution
residue_failures = _impl.residue_failures
first_failure = _impl.first_failure
glued_counts = _impl.glued_counts

__all__ = [
    "BACKEND",
    "sieve",
    "hooley_sums",
    "divisor_convolution",
    "residue_failures",
    "first_failure",
    "glued_counts",
]
