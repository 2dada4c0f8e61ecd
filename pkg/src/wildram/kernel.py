"""Kernel backend selection.

Prefers the compiled extension, falls back to the pure-Python kernels.
Set ``WILDRAM_KERNEL=py`` (or ``c``) to force a backend; forcing a
backend that cannot be imported is an error rather than a silent
substitution.
"""

import os

_forced = os.environ.get("WILDRAM_KERNEL", "").strip().lower()

if _forced in ("py", "python", "pure"):
    from . import _pykernels as _impl
    backend = "python"
elif _forced in ("c", "cy", "compiled"):
    from . import _ckernels as _impl  # type: ignore[no-redef]
    backend = "compiled"
elif _forced == "":
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]
        backend = "compiled"
    except ImportError:
        from . import _pykernels as _impl
        backend = "python"
else:
    raise RuntimeError(f"unknown WILDRAM_KERNEL value {_forced!r}")

conv = _impl.conv
inv_series = _impl.inv_series
cyclic_conv = _impl.cyclic_conv
