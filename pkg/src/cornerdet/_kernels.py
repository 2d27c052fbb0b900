"""Backend selection for the hot loops.

The Cython extension is used when it was built; otherwise, or when the
environment variable ``CORNERDET_PURE_PYTHON`` is set to a non-empty value,
the numpy implementation is used.
"""
import os

from . import _pykernels

if os.environ.get("CORNERDET_PURE_PYTHON"):
    backend = _pykernels
else:
    try:
        from . import _ckernels as backend
    except ImportError:
        backend = _pykernels

BACKEND = backend.NAME
BACKENDS = {"python": _pykernels}
try:
    from . import _ckernels as _c
except ImportError:
    pass
else:
    BACKENDS["cython"] = _c
