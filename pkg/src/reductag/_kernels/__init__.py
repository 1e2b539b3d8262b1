"""Hot loops of both taggers, compiled when possible.

The Cython extension is used if it was built; otherwise, or when the
``REDUCTAG_PURE`` environment variable is set, the pure-Python versions
are used. Both expose ``viterbi`` and ``combine_pass``.
"""

import os
from types import ModuleType

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def available_backends() -> list[str]:
    return ["python"] + (["cython"] if _ckernels is not None else [])


def get_backend(name: str) -> ModuleType:
    if name == "python":
        return _pykernels
    if name == "cython":
        if _ckernels is None:
            raise ImportError("the compiled kernels are not built; run `pip install -e .`")
        return _ckernels
    raise ValueError(f"unknown kernel backend {name!r}")


BACKEND = "cython" if _ckernels is not None and not os.environ.get("REDUCTAG_PURE") else "python"
_active = get_backend(BACKEND)

viterbi = _active.viterbi
combine_pass = _active.combine_pass
