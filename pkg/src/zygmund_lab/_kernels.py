"""Backend selection for the hot loops.

The compiled extension is used when importable; set ``ZYGMUND_LAB_PURE=1``
to force the numpy fallback.
"""
import os

from . import _fallback

BACKEND = "python"
_impl = _fallback
if not os.environ.get("ZYGMUND_LAB_PURE"):
    try:
        from . import _speedups as _impl  # noqa: F811

        BACKEND = "compiled"
    except ImportError:  # pragma: no cover - depends on build
        _impl = _fallback

cos_sin_sums = _impl.cos_sin_sums
partial_sum_sup = _impl.partial_sum_sup
