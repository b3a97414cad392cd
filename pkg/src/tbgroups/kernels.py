"""Select the compiled kernel module when available, else the numpy fallback.

Set ``TBGROUPS_PURE=1`` to force the fallback at import time, or call
:func:`set_backend` at runtime (tests and the benchmark do this).
"""
import os

from . import _pykernels

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

backend = _pykernels if (_compiled is None or os.environ.get("TBGROUPS_PURE")) else _compiled


def available() -> list[str]:
    return ["python"] + (["cython"] if _compiled is not None else [])


def set_backend(name: str):
    global backend
    if name == "cython":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not built; run `pip install -e .`")
        backend = _compiled
    elif name == "python":
        backend = _pykernels
    else:
        raise ValueError(f"unknown backend {name!r}")
    return backend
