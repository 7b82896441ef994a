"""The quantum side: the channel X -> (1/d) sum_i B_i X B_i*, its spectral
gap under both conventions, and quantum / Schatten-p edge expansion with
certified brackets.

Two gap conventions are co-reported because they genuinely differ when the
channel has negative real spectrum (the two-vertex graphical tuple has
gap 0 but second-smallest Laplacian singular value 1):

* ``gap``: 1 minus the operator norm of the channel restricted to the
  traceless subspace (variational convention);
* ``lambda2_sv``: second-smallest singular value of identity-minus-channel.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass

import numpy as np

from .core import (
    MatrixTuple,
    Subspace,
    coordinate_subspace,
    phase_fixed_qr,
    random_subspace,
    restrict,
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
    ValidationError,
    ZeroSubspaceError,
)
from .estimates import COORDINATE_ENUM_CAP, ExpansionEstimate, coordinate_count, iter_coordinate_index_sets
from .rng import spawn_rng

__all__ = [
    "Superoperator",
    "QuantumExpansionReport",
    "superoperator_matrix",
    "apply_channel",
    "apply_adjoint_channel",
    "quantum_expansion",
    "quantum_edge_value",
    "quantum_edge_bracket",
    "schatten_edge_value",
    "schatten_edge_bracket",
    "cp1_grid_minimum",
]

SUPEROPERATOR_MAX_N = 48
VEC_CONVENTION = "column-stacking"


@dataclass(frozen=True)
class Superoperator:
    """Dense matrix of the channel under column-stacking vectorization:
    applying ``matrix`` to vec(X) gives vec((1/d) sum_i B_i X B_i*)."""

    n: int
    matrix: np.ndarray
    convention: str = VEC_CONVENTION


@dataclass(frozen=True)
class QuantumExpansionReport:
    gap: float
    lambda2_sv: float
    spectrum: tuple[float, ...]


def _require_complex(b: MatrixTuple) -> None:
    if not b.field.is_complex:
        raise FieldError("quantum notions need the complex field")


def apply_channel(b: MatrixTuple, x: np.ndarray) -> np.ndarray:
    """(1/d) sum_i B_i X B_i*."""
    return np.einsum("iab,bc,idc->ad", b.mats, x, b.mats.conj()) / b.d


def apply_adjoint_channel(b: MatrixTuple, x: np.ndarray) -> np.ndarray:
    """(1/d) sum_i B_i* X B_i."""
    return np.einsum("iba,bc,icd->ad", b.mats.conj(), x, b.mats) / b.d


def superoperator_matrix(b: MatrixTuple, max_n: int = SUPEROPERATOR_MAX_N) -> Superoperator:
    """Dense n^2 x n^2 matrix (1/d) sum_i conj(B_i) kron B_i."""
    _require_complex(b)
    if b.n > max_n:
        raise SizeLimitError(f"dense superoperator capped at n = {max_n}, got {b.n}")
    if not validate_doubly_stochastic(b):
        warnings.warn("tuple is not doubly stochastic; superoperator built anyway", stacklevel=2)
    m = np.zeros((b.n * b.n, b.n * b.n), dtype=np.complex128)
    for i in range(b.d):
        m += np.kron(b.mats[i].conj(), b.mats[i])
    return Superoperator(n=b.n, matrix=m / b.d)


def traceless_frame(n: int) -> np.ndarray:
    """Orthonormal basis (columns) of the complement of vec(I_n)/sqrt(n),
    built from one Householder reflector so it is deterministic."""
    u = np.eye(n).reshape(-1, order="F") / np.sqrt(n)
    w = u.copy()
    w[0] -= 1.0
    nw2 = float(w @ w)
    h = np.eye(n * n)
    if nw2 > 1e-30:
        h -= 2.0 * np.outer(w, w) / nw2
    return h[:, 1:]


def quantum_expansion(b: MatrixTuple, ds_tol: float = 1e-8) -> QuantumExpansionReport:
    """Both gap conventions plus the singular spectrum of I - channel."""
    _require_complex(b)
    if not validate_doubly_stochastic(b, ds_tol):
        raise ValidationError("quantum expansion needs a doubly stochastic tuple")
    m = superoperator_matrix(b).matrix
    n2 = b.n * b.n
    frame = traceless_frame(b.n)
    u = np.eye(b.n).reshape(-1, order="F") / np.sqrt(b.n)
    leakage = float(np.max(np.abs(u.conj() @ m @ frame), initial=0.0))
    if leakage > 1e-10:
        raise ValidationError(f"traceless subspace not invariant (leakage {leakage:.2e})")
    compressed = frame.conj().T @ m @ frame
    top = float(np.linalg.svd(compressed, compute_uv=False)[0]) if n2 > 1 else 0.0
    lap_sv = np.sort(np.linalg.svd(np.eye(n2) - m, compute_uv=False))
    return QuantumExpansionReport(
        gap=float(1.0 - top),
        lambda2_sv=float(lap_sv[1]) if n2 > 1 else 0.0,
        spectrum=tuple(float(x) for x in lap_sv),
    )


def _check_subspace(b: MatrixTuple, v: Subspace) -> None:
    _require_complex(b)
    if not v.field.is_complex:
        raise FieldError("subspace lives over a prime field")
    if v.n != b.n:
        raise ShapeError(f"tuple acts on C^{b.n}, subspace lives in C^{v.n}")
    if v.dim == 0:
        raise ZeroSubspaceError("edge objectives reject the zero subspace")
    if 2 * v.dim > b.n:
        raise DimensionError(f"dim {v.dim} exceeds n/2 = {b.n / 2}")


def _edge_objective(mats: np.ndarray, d: int, t: np.ndarray) -> float:
    """<I - P, channel(P)> / dim V for P = T T*, via traces: no annihilator."""
    bt = mats @ t
    total = float(np.sum(np.abs(bt) ** 2))
    inner = np.einsum("ak,iab,bl->ikl", t.conj(), mats, t)
    total -= float(np.sum(np.abs(inner) ** 2))
    return total / (d * t.shape[1])


def quantum_edge_value(b: MatrixTuple, v: Subspace) -> float:
    """The edge objective <I - P_V, channel(P_V)> / dim V.

    In debug mode the value is cross-checked against the independent
    restriction route: (1/d) sum_i of squared Schatten-2 norms of the
    compressions B_i restricted between V-perp and V, divided by dim V.
    """
    _check_subspace(b, v)
    value = _edge_objective(b.mats, b.d, v.basis)
    if __debug__:
        alt = sum(restrict(b.mats[i], v).s2_norm() ** 2 for i in range(b.d))
        alt /= b.d * v.dim
        assert abs(value - alt) <= 1e-9 * max(1, b.n), (
            f"edge objective disagrees with restriction route: {value} vs {alt}"
        )
    return value


def schatten_edge_value(b: MatrixTuple, v: Subspace, p: float) -> float:
    """sum_i ||B_i restricted||_{S_p}^p / (d dim V); p = 2 recovers the
    quantum edge objective."""
    if p < 1:
        raise ConfigError(f"Schatten index must be >= 1, got {p}")
    _check_subspace(b, v)
    total = 0.0
    for i in range(b.d):
        sv = np.linalg.svd(restrict(b.mats[i], v).matrix, compute_uv=False)
        total += float(np.sum(sv**p))
    return total / (b.d * v.dim)


def cp1_grid_minimum(b: MatrixTuple, steps: int = 200) -> tuple[float, np.ndarray]:
    """Dense scan of the 1-dim objective over the unit sphere of C^2
    (vectors (cos theta, e^{i phi} sin theta))."""
    _require_complex(b)
    if b.n != 2:
        raise ShapeError("the dense angle grid is a 2-dimensional tool")
    theta = np.linspace(0.0, np.pi / 2, steps)
    phi = np.linspace(0.0, 2 * np.pi, steps, endpoint=False)
    tt, pp = np.meshgrid(theta, phi, indexing="ij")
    vecs = np.stack([np.cos(tt).ravel(), np.exp(1j * pp.ravel()) * np.sin(tt).ravel()])
    bv = np.einsum("iab,bn->ian", b.mats, vecs)
    norms = np.sum(np.abs(bv) ** 2, axis=1)
    quad = np.einsum("an,ian->in", vecs.conj(), bv)
    values = np.mean(norms - np.abs(quad) ** 2, axis=0)
    k = int(np.argmin(values))
    return float(values[k]), vecs[:, k].copy()


def _edge_gradient(b: MatrixTuple, t: np.ndarray, adjoint_identity: np.ndarray) -> np.ndarray:
    p = t @ t.conj().T
    sym = apply_channel(b, p) + apply_adjoint_channel(b, p)
    return (2.0 / t.shape[1]) * (adjoint_identity @ t - sym @ t)


def _refine_descent(
    b: MatrixTuple, t0: np.ndarray, max_steps: int = 500, init_step: float = 0.1
) -> tuple[np.ndarray, float, int]:
    """Projected gradient descent on frames with QR retraction and
    backtracking line search; stops on relative improvement < 1e-10."""
    adjoint_identity = np.einsum("iba,ibc->ac", b.mats.conj(), b.mats) / b.d
    t = t0
    value = _edge_objective(b.mats, b.d, t)
    evals = 1
    step = init_step
    for _ in range(max_steps):
        grad = _edge_gradient(b, t, adjoint_identity)
        scale = float(np.linalg.norm(grad))
        if scale < 1e-14:
            break
        s = step
        improved = False
        for _ in range(40):
            cand = phase_fixed_qr(t - s * grad)
            cand_value = _edge_objective(b.mats, b.d, cand)
            evals += 1
            if cand_value < value - 1e-15:
                improved = True
                break
            s /= 2
        if not improved:
            break
        rel = (value - cand_value) / max(abs(value), 1e-30)
        t, value = cand, cand_value
        step = min(init_step, 2 * s)
        if rel < 1e-10:
            break
    return t, value, evals


def _search_bracket(
    b: MatrixTuple,
    objective,
    budget: int,
    seed: int,
    label: str,
    refine: bool,
    use_grid: bool = False,
) -> tuple[float, Subspace, int, tuple[int, ...]]:
    if budget <= 0:
        raise ConfigError("search budget must be positive")
    max_dim = b.n // 2
    if max_dim < 1:
        raise DimensionError("no feasible dimensions: need n >= 2")
    dims = tuple(range(1, max_dim + 1))
    best_value = np.inf
    best_t = None
    per_dim_best: dict[int, np.ndarray] = {}
    per_dim_value: dict[int, float] = {}
    evals = 0

    def consider(t: np.ndarray, value: float) -> None:
        nonlocal best_value, best_t
        r = t.shape[1]
        if value < per_dim_value.get(r, np.inf):
            per_dim_value[r] = value
            per_dim_best[r] = t
        if value < best_value:
            best_value = value
            best_t = t

    if coordinate_count(b.n, max_dim) <= COORDINATE_ENUM_CAP:
        for idx in iter_coordinate_index_sets(b.n, max_dim):
            t = coordinate_subspace(b.field, b.n, idx).basis
            value = objective(t)
            evals += 1
            consider(t, value)

    if use_grid and b.n == 2:
        grid_value, grid_vec = cp1_grid_minimum(b)
        evals += 200 * 200
        consider(grid_vec.reshape(2, 1), grid_value)

    remaining = max(budget - evals, 10 * max_dim)
    per_dim = max(1, remaining // max_dim)
    for r in dims:
        rng = spawn_rng(seed, label, "random", r)
        for _ in range(per_dim):
            t = random_subspace(b.field, b.n, r, rng).basis
            value = objective(t)
            evals += 1
            consider(t, value)

    if refine:
        for r in dims:
            start = per_dim_best.get(r)
            if start is None:
                continue
            t, value, used = _refine_descent(b, start)
            evals += used
            consider(t, value)

    witness = subspace_from_columns(best_t, b.field)
    return float(best_value), witness, evals, dims


def quantum_edge_bracket(b: MatrixTuple, budget: int = 20000, seed: int = 0) -> ExpansionEstimate:
    """Certified bracket for the quantum edge expansion: best_value from
    coordinate/grid/random search plus projected-gradient refinement,
    lower_bound = gap/2 when the tuple is doubly stochastic."""
    _require_complex(b)
    value, witness, evals, dims = _search_bracket(
        b,
        lambda t: _edge_objective(b.mats, b.d, t),
        budget,
        seed,
        "quantum-edge",
        refine=True,
        use_grid=True,
    )
    final = quantum_edge_value(b, witness)
    lower = None
    if b.n <= SUPEROPERATOR_MAX_N and validate_doubly_stochastic(b):
        lower = max(quantum_expansion(b).gap, 0.0) / 2
    return ExpansionEstimate(
        best_value=final,
        witness=witness,
        lower_bound=lower,
        dims_searched=dims,
        evaluations=evals,
        seed=seed,
    )


def schatten_edge_bracket(
    b: MatrixTuple, p: float, budget: int = 20000, seed: int = 0
) -> ExpansionEstimate:
    """Search-only bracket for the Schatten-p edge expansion; no certified
    lower bound exists for general p. The p = 2 case routes through the
    same objective and refinement as the quantum bracket, so equal seeds
    give equal outcomes there."""
    if p < 1:
        raise ConfigError(f"Schatten index must be >= 1, got {p}")
    _require_complex(b)
    if p == 2:
        est = quantum_edge_bracket(b, budget=budget, seed=seed)
        return ExpansionEstimate(
            best_value=est.best_value,
            witness=est.witness,
            lower_bound=None,
            dims_searched=est.dims_searched,
            evaluations=est.evaluations,
            seed=seed,
        )

    def objective(t: np.ndarray) -> float:
        return schatten_edge_value(b, subspace_from_columns(t, b.field), p)

    value, witness, evals, dims = _search_bracket(
        b, objective, budget, seed, f"schatten-{p}", refine=False
    )
    return ExpansionEstimate(
        best_value=schatten_edge_value(b, witness, p),
        witness=witness,
        lower_bound=None,
        dims_searched=dims,
        evaluations=evals,
        seed=seed,
    )
