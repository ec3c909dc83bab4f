"""Backend selection for the hot kernels.

The compiled ``_ckernels`` extension is used when it imports; otherwise the
pure-Python ``_pykernels`` module.  Set ``KUMMERPRIME_PURE_PYTHON=1`` to force
the fallback (handy for benchmarking and for debugging).
"""

from __future__ import annotations

import os

from . import _pykernels

_FORCE_PY = os.environ.get("KUMMERPRIME_PURE_PYTHON", "") not in ("", "0")

if _FORCE_PY:
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl  # type: ignore[attr-defined]
    except ImportError:  # extension not built
        _impl = _pykernels

BACKEND: str = _impl.BACKEND
IDENTITY = _pykernels.IDENTITY

iterate_step = _impl.iterate_step
iterate_until_identity = _impl.iterate_until_identity
rref_mod_p = _impl.rref_mod_p
jac_add = _impl.jac_add
jac_neg = _impl.jac_neg
jac_mul = _impl.jac_mul
jac_enumerate = _impl.jac_enumerate
count_seeds_killed = _impl.count_seeds_killed


def backends() -> dict:
    """Every importable backend by name (the benchmark compares them)."""
    out = {"python": _pykernels}
    try:
        from . import _ckernels  # type: ignore[attr-defined]
        out["compiled"] = _ckernels
    except ImportError:
        pass
    return out
