"""Kernel backend selection.

The compiled Cython module is used when it was built; otherwise the numpy
fallback is loaded.  Set ``MLEVIDENCE_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _pykernels as python_backend

compiled_backend = None
if not os.environ.get("MLEVIDENCE_PURE_PYTHON"):
    try:
        from . import _ckernels as compiled_backend
    except ImportError:  # extension not built
        compiled_backend = None

backend = compiled_backend if compiled_backend is not None else python_backend

pivot = backend.pivot
choose_entering = backend.choose_entering
ratio_test = backend.ratio_test
loglik_grad = backend.loglik_grad
line_search = backend.line_search

__all__ = [
    "backend",
    "compiled_backend",
    "python_backend",
    "pivot",
    "choose_entering",
    "ratio_test",
    "loglik_grad",
    "line_search",
]
