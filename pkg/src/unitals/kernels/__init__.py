"""Kernel backend dispatch.

``get_backend()`` returns the module providing the hot kernels: the
compiled extension when importable, else the pure-Python reference. Set
``UNITALS_KERNELS=python`` or ``=cython`` to force one (forcing cython
raises if the extension is missing). Both backends expose the same
functions and produce identical results.
"""

from __future__ import annotations

import os

from ..errors import ParameterError

_CACHE: dict[str, object] = {}


def get_backend(name: str | None = None):
    if name is None:
        name = os.environ.get("UNITALS_KERNELS", "auto")
    if name not in ("auto", "cython", "python"):
        raise ParameterError(f"unknown kernel backend {name!r}; expected auto, cython, or python")
    if name in _CACHE:
        return _CACHE[name]
    mod = None
    if name in ("auto", "cython"):
        try:
            from . import _cy as mod  # type: ignore[attr-defined]
        except ImportError:
            if name == "cython":
                raise
            mod = None
    if mod is None:
        from . import _py as mod
    _CACHE[name] = mod
    return mod


def backend_name() -> str:
    return get_backend().BACKEND_NAME
