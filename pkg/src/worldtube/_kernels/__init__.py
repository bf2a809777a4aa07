"""Hot-kernel backend selection.

The compiled Cython core is used when importable; otherwise the numpy fallback
takes over transparently.  Set WORLDTUBE_FORCE_FALLBACK=1 to force the numpy
path (the benchmark uses this to compare both).
"""

import os

from .fallback import (  # noqa: F401  (status codes are backend independent)
    STATUS_HORIZON,
    STATUS_NO_CONVERGE,
    STATUS_OK,
    STATUS_ON_WORLDLINE,
)
from . import fallback

if os.environ.get("WORLDTUBE_FORCE_FALLBACK"):
    _impl = fallback
    BACKEND = "fallback"
else:
    try:
        from . import _core as _impl
        BACKEND = "compiled"
    except ImportError:
        _impl = fallback
        BACKEND = "fallback"

retarded_canonical = _impl.retarded_canonical
lw_potential_batch = _impl.lw_potential_batch
shell_potential_batch = _impl.shell_potential_batch


def backends():
    """Importable backends, for tests and the benchmark."""
    out = {"fallback": fallback}
    try:
        from . import _core
        out["compiled"] = _core
    except ImportError:
        pass
    return out
