"""Hot kernels with a selectable backend.

The environment variable EXPANDLAB_BACKEND picks the implementation:

* ``auto`` (default): numba if it imports, else pure numpy
* ``numba``: require the numba backend, fail loudly if unavailable
* ``numpy``: force the pure-numpy reference backend

The resolved choice is exposed as ``ACTIVE_BACKEND``. Both backends share
contracts and bit-identical outputs; ``benchmarks/bench_kernels.py`` times
them side by side.
"""

from __future__ import annotations

import os

from ..errors import ConfigError
from . import numpy_impl

_flag = os.environ.get("EXPANDLAB_BACKEND", "auto").strip().lower() or "auto"
if _flag not in ("auto", "numba", "numpy"):
    raise ConfigError(
        f"EXPANDLAB_BACKEND must be 'auto', 'numba' or 'numpy', got {_flag!r}"
    )

_impl = numpy_impl
ACTIVE_BACKEND = "numpy"
if _flag in ("auto", "numba"):
    try:
        from . import numba_impl as _numba_impl
    except Exception as exc:
        if _flag == "numba":
            raise ConfigError(
                f"EXPANDLAB_BACKEND=numba but the numba backend failed to import: {exc}"
            ) from exc
    else:
        _impl = _numba_impl
        ACTIVE_BACKEND = "numba"

gf_rref = _impl.gf_rref
gf_rank = _impl.gf_rank
gf_rcef = _impl.gf_rcef
gf_nullspace = _impl.gf_nullspace
gf_subspace_scores = _impl.gf_subspace_scores
gf_block_scores = _impl.gf_block_scores
graph_best_subset = _impl.graph_best_subset
