"""Kernel backend selection.

Set CMREG_BACKEND=numpy to force the pure-numpy kernels, CMREG_BACKEND=numba
to require the JIT kernels (ImportError if numba is missing).  Unset or
"auto" tries numba and falls back silently.  Both backends produce
identical arrays, so every downstream output is backend-independent.
"""

import os

from .common import COMP_BITS, COMP_MASK

_choice = os.environ.get("CMREG_BACKEND", "auto").lower()

if _choice == "numpy":
    from . import numpy_impl as _impl
elif _choice == "numba":
    from . import numba_impl as _impl
elif _choice == "auto":
    try:
        from . import numba_impl as _impl
    except ImportError:
        from . import numpy_impl as _impl
else:
    raise ValueError(f"CMREG_BACKEND must be 'numba', 'numpy' or 'auto', got {_choice!r}")

BACKEND = _impl.NAME
combine_terms = _impl.combine_terms
reduce_full = _impl.reduce_full
rref_mod = _impl.rref_mod

__all__ = ["BACKEND", "COMP_BITS", "COMP_MASK", "combine_terms", "reduce_full", "rref_mod"]
