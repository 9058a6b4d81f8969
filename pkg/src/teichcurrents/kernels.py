"""Backend selection for the inner loops.

The compiled extension is used when it has been built; otherwise the
pure-Python module is loaded. Setting ``TEICHCURRENTS_PURE_PYTHON=1`` forces
the fallback.
"""
import os

from teichcurrents import _pykernels

if os.environ.get("TEICHCURRENTS_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
else:
    try:
        from teichcurrents import _ckernels as _impl
    except ImportError:  # extension not built
        _impl = _pykernels

BACKEND = "python" if _impl is _pykernels else "cython"

eval_words = _impl.eval_words
reduce_point = _impl.reduce_point
flow_series = _impl.flow_series
linked_axes = _impl.linked_axes

OBSERVABLES = {
    "one": _pykernels.OBS_ONE,
    "bump": _pykernels.OBS_BUMP,
    "exp": _pykernels.OBS_EXP,
}


def backends():
    """Return every importable backend as a ``{name: module}`` mapping."""
    found = {"python": _pykernels}
    try:
        from teichcurrents import _ckernels
    except ImportError:
        pass
    else:
        found["cython"] = _ckernels
    return found
