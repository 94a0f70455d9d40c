"""Kernel backend selection.

The compiled ``_ckernels`` extension is used when it imports; otherwise the
numpy fallback in ``_pykernels`` is used. Set ``SUBMFCC_BACKEND=python`` to
force the fallback.
"""
import os

from . import _pykernels

python = _pykernels

try:
    from . import _ckernels as cython
except ImportError:
    cython = None


def select(name=None):
    """Return the kernel module for ``name`` ("cython", "python" or None=auto)."""
    if name is None:
        name = os.environ.get("SUBMFCC_BACKEND", "auto")
    if name == "python":
        return python
    if name == "cython":
        if cython is None:
            raise ImportError("submfcc._ckernels is not built")
        return cython
    if name != "auto":
        raise ValueError(f"unknown kernel backend {name!r}")
    return cython if cython is not None else python


active = select()
BACKEND = active.NAME
