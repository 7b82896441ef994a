"""Dimension expansion and dimension edge expansion.

Per-subspace evaluators work over both fields. Over a prime field the full
minimum is computed exactly by enumerating every subspace in canonical
column-echelon form (capped at 1e7); over the complex field only certified
upper bounds are reported, found by coordinate/random search with local
moves, with theorem lower bounds when the tuple is doubly stochastic.

The edge denominator is ``normalization * dim V`` with the normalization an
explicit parameter defaulting to the tuple length; graphical tuples use the
graph degree instead (callers pass it), since both readings are in play for
tuples built from graphs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from . import kernels
from .core import (
    MatrixTuple,
    Subspace,
    coordinate_subspace,
    phase_fixed_qr,
    random_subspace,
    restrict,
    numerical_rank,
    subspace_from_columns,
    validate_doubly_stochastic,
    validate_unitary,
)
from .errors import (
    ConfigError,
    DimensionError,
    FieldError,
    ShapeError,
    SizeLimitError,
    ZeroSubspaceError,
)
from .estimates import COORDINATE_ENUM_CAP, ExpansionEstimate, coordinate_count, iter_coordinate_index_sets
from .fields import FieldSpec
from .quantum import SUPEROPERATOR_MAX_N, quantum_expansion
from .rng import spawn_rng

__all__ = [
    "DimensionReport",
    "expansion_value",
    "edge_value",
    "enumerate_subspaces",
    "subspace_count",
    "exact_expansion_finite_field",
    "dimension_expansion_estimate",
    "dimension_edge_estimate",
    "generic_expansion_check",
]

ENUMERATION_CAP = 10**7
_CHUNK = 1 << 14


@dataclass
class DimensionReport:
    """Exact (or estimated) dimension expansion figures; exact reports
    carry rationals and witnesses that reproduce them."""

    mu: Fraction | float
    h_d: Fraction | float
    mu_witness: Subspace | None
    hd_witness: Subspace | None
    normalization: int
    exact: bool
    subspaces_scanned: int = 0


def _check_subspace(b: MatrixTuple, v: Subspace) -> None:
    if b.field.is_complex != v.field.is_complex or (
        not b.field.is_complex and b.field.p != v.field.p
    ):
        raise FieldError(f"tuple over {b.field} but subspace over {v.field}")
    if v.n != b.n:
        raise ShapeError(f"tuple acts on F^{b.n}, subspace lives in F^{v.n}")
    if v.dim == 0:
        raise ZeroSubspaceError("expansion objectives reject the zero subspace")
    if 2 * v.dim > b.n:
        raise DimensionError(f"dim {v.dim} exceeds n/2 = {b.n / 2}")


def _span_rank(b: MatrixTuple, t: np.ndarray) -> int:
    """rank of [T | B_1 T | ... | B_d T]."""
    cols = [t] + [b.mats[i] @ t for i in range(b.d)]
    stack = np.hstack(cols)
    if not b.field.is_complex:
        stack %= b.field.p
        return int(kernels.gf_rank(np.ascontiguousarray(stack), b.field.p))
    return numerical_rank(stack, b.field)


def expansion_value(b: MatrixTuple, v: Subspace) -> Fraction | float:
    """(dim(V + B(V)) - dim V) / dim V; exact over GF(p), rank-tolerance
    float over the complex field."""
    _check_subspace(b, v)
    r = v.dim
    grown = _span_rank(b, v.basis)
    if b.field.is_complex:
        return float(grown - r) / r
    return Fraction(grown - r, r)


def _restriction_rank_sum(b: MatrixTuple, v: Subspace) -> int:
    return sum(restrict(b.mats[i], v).rank() for i in range(b.d))


def edge_value(b: MatrixTuple, v: Subspace, normalization: int | None = None) -> Fraction | float:
    """sum_i rank(B_i restricted between V-perp and V) over
    (normalization * dim V)."""
    norm = b.d if normalization is None else int(normalization)
    if norm <= 0:
        raise ConfigError(f"normalization must be a positive integer, got {normalization}")
    _check_subspace(b, v)
    total = _restriction_rank_sum(b, v)
    if b.field.is_complex:
        return float(total) / (norm * v.dim)
    return Fraction(total, norm * v.dim)


def subspace_count(n: int, p: int, max_dim: int) -> int:
    """Number of subspaces of GF(p)^n with dimension 1..max_dim (Gaussian
    binomial sums)."""
    total = 0
    for r in range(1, max_dim + 1):
        num = 1
        den = 1
        for i in range(r):
            num *= p ** (n - i) - 1
            den *= p ** (i + 1) - 1
        total += num // den
    return total


def _pattern_blocks(n: int, p: int, pivots: tuple[int, ...], chunk: int = _CHUNK):
    """All reduced-column-echelon bases with the given pivot rows, yielded
    as (m, n, r) int64 blocks in a fixed lexicographic value order."""
    r = len(pivots)
    pivot_set = set(pivots)
    slots = [
        (row, col)
        for col in range(r)
        for row in range(pivots[col] + 1, n)
        if row not in pivot_set
    ]
    f = len(slots)
    count = p**f
    base = np.zeros((n, r), dtype=np.int64)
    for col, row in enumerate(pivots):
        base[row, col] = 1
    for lo in range(0, count, chunk):
        hi = min(lo + chunk, count)
        idx = np.arange(lo, hi, dtype=np.int64)
        block = np.broadcast_to(base, (hi - lo, n, r)).copy()
        for k, (row, col) in enumerate(slots):
            block[:, row, col] = (idx // p ** (f - 1 - k)) % p
        yield block


def enumerate_subspaces(n: int, p: int, max_dim: int, cap: int = ENUMERATION_CAP):
    """Every subspace of GF(p)^n of dimension 1..max_dim exactly once, in
    canonical form, ordered by (dimension, pivot pattern, fill values)."""
    field = FieldSpec(p=p)
    if not (1 <= max_dim <= n):
        raise DimensionError(f"max_dim {max_dim} outside 1..{n}")
    total = subspace_count(n, p, max_dim)
    if total > cap:
        raise SizeLimitError(f"{total} subspaces exceed the cap {cap}")
    for r in range(1, max_dim + 1):
        for pivots in combinations(range(n), r):
            for block in _pattern_blocks(n, p, pivots):
                for row in range(block.shape[0]):
                    yield Subspace(field=field, n=n, basis=block[row])


def exact_expansion_finite_field(
    b: MatrixTuple, normalization: int | None = None, cap: int = ENUMERATION_CAP
) -> DimensionReport:
    """Exact mu and h_D over GF(p) by scanning every subspace of dimension
    1..n/2. Ties keep the first witness in canonical enumeration order."""
    if b.field.is_complex:
        raise FieldError("exact enumeration exists over prime fields only")
    norm = b.d if normalization is None else int(normalization)
    if norm <= 0:
        raise ConfigError(f"normalization must be a positive integer, got {normalization}")
    n, p = b.n, b.field.p
    max_dim = n // 2
    if max_dim < 1:
        raise DimensionError("need n >= 2")
    total = subspace_count(n, p, max_dim)
    if total > cap:
        raise SizeLimitError(f"{total} subspaces exceed the cap {cap}")
    mats = np.ascontiguousarray(b.mats)
    best_mu: Fraction | None = None
    best_hd: Fraction | None = None
    mu_basis = None
    hd_basis = None
    scanned = 0
    for r in range(1, max_dim + 1):
        for pivots in combinations(range(n), r):
            for block in _pattern_blocks(n, p, pivots):
                sums, spans = kernels.gf_block_scores(mats, block, p)
                scanned += block.shape[0]
                for row in range(block.shape[0]):
                    mu_val = Fraction(int(spans[row]) - r, r)
                    hd_val = Fraction(int(sums[row]), norm * r)
                    if best_mu is None or mu_val < best_mu:
                        best_mu = mu_val
                        mu_basis = block[row].copy()
                    if best_hd is None or hd_val < best_hd:
                        best_hd = hd_val
                        hd_basis = block[row].copy()
    field = b.field
    return DimensionReport(
        mu=best_mu,
        h_d=best_hd,
        mu_witness=Subspace(field=field, n=n, basis=mu_basis),
        hd_witness=Subspace(field=field, n=n, basis=hd_basis),
        normalization=norm,
        exact=True,
        subspaces_scanned=scanned,
    )


def _spectral_lower(b: MatrixTuple, kind: str, normalization: int) -> float | None:
    """Theorem lower bound from the spectral gap, when one applies.

    kind "mu": mu >= gap/(2d), sharpened to gap/2 for unitary tuples.
    kind "hd": h_D (tuple-length normalization) >= gap/(2d), sharpened to
    gap/2 for unitary tuples; rescaled by d/normalization.
    """
    if b.n > SUPEROPERATOR_MAX_N or not validate_doubly_stochastic(b):
        return None
    gap = max(quantum_expansion(b).gap, 0.0)
    unitary = validate_unitary(b)
    if kind == "mu":
        return gap / 2 if unitary else gap / (2 * b.d)
    scale = b.d / normalization
    return scale * gap / 2 if unitary else scale * gap / (2 * b.d)


def _complex_search(
    b: MatrixTuple, objective, budget: int, seed: int, label: str
) -> tuple[float, Subspace, int, tuple[int, ...]]:
    if budget <= 0:
        raise ConfigError("search budget must be positive")
    max_dim = b.n // 2
    if max_dim < 1:
        raise DimensionError("no feasible dimensions: need n >= 2")
    dims = tuple(range(1, max_dim + 1))
    best_value = np.inf
    best_t = None
    evals = 0

    def consider(t: np.ndarray, value: float) -> None:
        nonlocal best_value, best_t
        if value < best_value:
            best_value = value
            best_t = t

    if coordinate_count(b.n, max_dim) <= COORDINATE_ENUM_CAP:
        for idx in iter_coordinate_index_sets(b.n, max_dim):
            t = coordinate_subspace(b.field, b.n, idx).basis
            value = objective(t)
            evals += 1
            consider(t, value)

    remaining = max(budget - evals, 10 * max_dim)
    sample_budget = remaining // 2
    per_dim = max(1, sample_budget // max_dim)
    for r in dims:
        rng = spawn_rng(seed, label, "random", r)
        for _ in range(per_dim):
            t = random_subspace(b.field, b.n, r, rng).basis
            value = objective(t)
            evals += 1
            consider(t, value)

    move_budget = remaining - sample_budget
    restarts = 50
    moves_each = max(1, move_budget // max(restarts, 1))
    rng = spawn_rng(seed, label, "moves")
    for restart in range(restarts):
        if restart == 0 and best_t is not None:
            t = best_t.copy()
        else:
            r = int(rng.integers(1, max_dim + 1))
            t = random_subspace(b.field, b.n, r, rng).basis
        value = objective(t)
        evals += 1
        for _ in range(moves_each):
            k = int(rng.integers(t.shape[1]))
            cand = np.array(t, copy=True)
            cand[:, k] = rng.standard_normal(b.n) + 1j * rng.standard_normal(b.n)
            q = phase_fixed_qr(cand)
            value_new = objective(q)
            evals += 1
            if value_new < value - 1e-12:
                t, value = q, value_new
        consider(t, value)

    witness = subspace_from_columns(best_t, b.field)
    return float(best_value), witness, evals, dims


def dimension_expansion_estimate(
    b: MatrixTuple, budget: int = 20000, seed: int = 0
) -> ExpansionEstimate:
    """Certified-upper-bound estimate of mu over the complex field; exact
    (tight bracket) over prime fields via full enumeration."""
    if not b.field.is_complex:
        rep = exact_expansion_finite_field(b)
        value = float(rep.mu)
        return ExpansionEstimate(
            best_value=value,
            witness=rep.mu_witness,
            lower_bound=value,
            dims_searched=tuple(range(1, b.n // 2 + 1)),
            evaluations=rep.subspaces_scanned,
            seed=seed,
        )
    value, witness, evals, dims = _complex_search(
        b,
        lambda t: float(_span_rank(b, t) - t.shape[1]) / t.shape[1],
        budget,
        seed,
        "dim-expansion",
    )
    return ExpansionEstimate(
        best_value=expansion_value(b, witness),
        witness=witness,
        lower_bound=_spectral_lower(b, "mu", b.d),
        dims_searched=dims,
        evaluations=evals,
        seed=seed,
    )


def dimension_edge_estimate(
    b: MatrixTuple, budget: int = 20000, seed: int = 0, normalization: int | None = None
) -> ExpansionEstimate:
    """Like dimension_expansion_estimate but for the edge objective."""
    norm = b.d if normalization is None else int(normalization)
    if norm <= 0:
        raise ConfigError(f"normalization must be a positive integer, got {normalization}")
    if not b.field.is_complex:
        rep = exact_expansion_finite_field(b, normalization=norm)
        value = float(rep.h_d)
        return ExpansionEstimate(
            best_value=value,
            witness=rep.hd_witness,
            lower_bound=value,
            dims_searched=tuple(range(1, b.n // 2 + 1)),
            evaluations=rep.subspaces_scanned,
            seed=seed,
        )

    def objective(t: np.ndarray) -> float:
        v = subspace_from_columns(t, b.field)
        return float(_restriction_rank_sum(b, v)) / (norm * v.dim)

    value, witness, evals, dims = _complex_search(b, objective, budget, seed, "dim-edge")
    return ExpansionEstimate(
        best_value=edge_value(b, witness, norm),
        witness=witness,
        lower_bound=_spectral_lower(b, "hd", norm),
        dims_searched=dims,
        evaluations=evals,
        seed=seed,
    )


def generic_expansion_check(b: MatrixTuple, r: int, trials: int = 20, seed: int = 0) -> bool:
    """True iff Haar-random r-dim subspaces expand to full generic rank
    min(n, (d+1) r) on every trial."""
    if not b.field.is_complex:
        raise FieldError("the generic-rank check is a complex-field tool")
    if not (1 <= r <= b.n):
        raise DimensionError(f"dimension {r} outside 1..{b.n}")
    rng = spawn_rng(seed, "generic-check", r)
    target = min(b.n, (b.d + 1) * r)
    for _ in range(trials):
        t = random_subspace(b.field, b.n, r, rng).basis
        if _span_rank(b, t) != target:
            return False
    return True
