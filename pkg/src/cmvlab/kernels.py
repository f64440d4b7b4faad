"""Kernel selection: compiled extension when available, numpy fallback else.

``BACKEND`` names the active implementation.  Both backends expose
``cocycle_products``, ``cocycle_lognorms`` and ``lognorm_2x2`` with the
same contract; the benchmark suite compares them head to head.
"""

from __future__ import annotations

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

_impl = _compiled if _compiled is not None else _kernels_py

BACKEND = "compiled" if _compiled is not None else "python"

cocycle_products = _impl.cocycle_products
cocycle_lognorms = _impl.cocycle_lognorms
lognorm_2x2 = _impl.lognorm_2x2


def backends() -> dict:
    """All importable backends, keyed by name."""
    out = {"python": _kernels_py}
    if _compiled is not None:
        out["compiled"] = _compiled
    return out
