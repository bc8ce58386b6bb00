"""Backend selection for the hot kernels.

The compiled ``_ckernels`` extension is used when it was built; otherwise the
numpy implementation in ``_pykernels`` is loaded.  Setting the environment
variable ``COHBELL_PURE_PYTHON=1`` forces the fallback.
"""
import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if os.environ.get("COHBELL_PURE_PYTHON", "").strip() not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _pykernels

PAIRS = _pykernels.PAIRS
SIGNS = _pykernels.SIGNS

jacobi_eigh = _impl.jacobi_eigh
bloch_basis = _impl.bloch_basis
rotate_pair = _impl.rotate_pair
pair_stats = _impl.pair_stats
bell_stats = _impl.bell_stats
objective = _impl.objective


def available_backends():
    """Map of backend name to kernel module, for tests and benchmarks."""
    out = {"python": _pykernels}
    try:
        from . import _ckernels

        out["cython"] = _ckernels
    except ImportError:
        pass
    return out
