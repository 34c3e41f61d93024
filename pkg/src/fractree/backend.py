"""Kernel backend selection: compiled extension with numpy fallback.

The compiled `_kernels` extension is used when importable; otherwise the
pure-numpy `_fallback` module takes over.  Set ``FRACTREE_BACKEND`` to
``cython`` or ``fallback`` to force one (forcing ``cython`` when the
extension is missing raises at import).
"""

from __future__ import annotations

import os

from . import _fallback

_forced = os.environ.get("FRACTREE_BACKEND", "").strip().lower()

if _forced == "fallback":
    kernels = _fallback
elif _forced == "cython":
    from . import _kernels as kernels  # type: ignore[no-redef]
else:
    if _forced:
        raise ImportError(f"unknown FRACTREE_BACKEND {_forced!r}")
    try:
        from . import _kernels as kernels  # type: ignore[no-redef]
    except ImportError:
        kernels = _fallback


def backend_name() -> str:
    """Name of the active kernel backend ('cython' or 'fallback')."""
    return kernels.BACKEND_NAME


def get_kernels(name: str | None = None):
    """Kernel module for an explicit backend name, or the active one."""
    if name is None:
        return kernels
    if name == "fallback":
        return _fallback
    if name == "cython":
        from . import _kernels

        return _kernels
    raise ValueError(f"unknown backend {name!r}")
