"""Kernel selection: the compiled extension when importable, else pure Python."""

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

BACKENDS = {"python": _kernels_py}
if _compiled is not None:
    BACKENDS["compiled"] = _compiled

DEFAULT_BACKEND = "compiled" if _compiled is not None else "python"


def get_backend(name=None):
    name = name or DEFAULT_BACKEND
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"kernel backend {name!r} unavailable; have {sorted(BACKENDS)}") from None
