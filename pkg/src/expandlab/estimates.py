"""Shared plumbing for certified brackets: the estimate record and
coordinate-subspace enumeration used by the quantum and dimension searches.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .core import Subspace

COORDINATE_ENUM_CAP = 1 << 20


@dataclass
class ExpansionEstimate:
    """Outcome of a subspace search for a nonconvex minimum.

    ``best_value`` is a true upper bound (its witness evaluates to it);
    ``lower_bound``, when present, comes from a theorem, so the truth lies
    in [lower_bound, best_value].
    """

    best_value: float
    witness: Subspace | None
    lower_bound: float | None = None
    dims_searched: tuple[int, ...] = ()
    evaluations: int = 0
    seed: int | None = None


def coordinate_count(n: int, max_dim: int) -> int:
    return sum(math.comb(n, r) for r in range(1, max_dim + 1))


def iter_coordinate_index_sets(n: int, max_dim: int):
    """All index subsets of size 1..max_dim in (size, lex) order."""
    for r in range(1, max_dim + 1):
        yield from itertools.combinations(range(n), r)
