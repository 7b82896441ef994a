"""Core types: matrix tuples, subspaces, restrictions, and the operations
that everything else is built from.

Conventions
-----------
* A matrix tuple is d square matrices of size n over one field, stored as a
  single (d, n, n) array.
* A subspace is held by a canonical basis with vectors as columns. Over the
  complex field the canonical form is the column-pivoted QR of the
  orthogonal projector with phase-fixed columns; over GF(p) it is the
  reduced column echelon form, which is exactly unique.
* The annihilator pairs subspaces through the bilinear dot product over
  GF(p) and the Hermitian inner product over the complex field, so over the
  complex numbers it is the orthogonal complement.
* The zero subspace is representable (an n-by-0 basis) so images and
  kernels always exist, but expansion evaluators reject it.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np
import scipy.linalg

from . import kernels
from .errors import (
    DimensionError,
    FieldError,
    ShapeError,
    ValidationError,
    ZeroSubspaceError,
)
from .fields import COMPLEX, FieldSpec, coerce_array
from .rng import spawn_rng

__all__ = [
    "MatrixTuple",
    "Subspace",
    "Restriction",
    "make_tuple",
    "canonical_basis",
    "annihilator",
    "restrict",
    "numerical_rank",
    "validate_doubly_stochastic",
    "validate_unitary",
    "subspace_image",
    "random_subspace",
    "phase_fixed_qr",
]


@dataclass(eq=False)
class MatrixTuple:
    """A tuple of d matrices in M(n, F), the package's main object."""

    field: FieldSpec
    n: int
    mats: np.ndarray  # (d, n, n)
    meta: dict = dc_field(default_factory=dict)
    _cache: dict = dc_field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        self.mats = coerce_array(self.mats, self.field)
        if self.mats.ndim != 3:
            raise ShapeError(f"expected a (d, n, n) array, got shape {self.mats.shape}")
        d, a, b = self.mats.shape
        if d < 1:
            raise ShapeError("a tuple needs at least one matrix")
        if a != self.n or b != self.n:
            raise ShapeError(f"matrices are {a}x{b}, expected {self.n}x{self.n}")
        self.mats.setflags(write=False)

    @property
    def d(self) -> int:
        return self.mats.shape[0]

    def __len__(self) -> int:
        return self.d

    def __getitem__(self, i: int) -> np.ndarray:
        return self.mats[i]


def make_tuple(mats, field: FieldSpec = COMPLEX, meta: dict | None = None) -> MatrixTuple:
    arr = coerce_array(np.asarray(mats), field)
    if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
        raise ShapeError(f"expected a (d, n, n) array, got shape {arr.shape}")
    return MatrixTuple(field=field, n=arr.shape[1], mats=arr, meta=dict(meta or {}))


@dataclass(eq=False)
class Subspace:
    """A subspace of F^n held by a canonical basis (columns).

    Instances should come from :func:`canonical_basis` or the other
    constructors here; the basis is assumed canonical and is frozen.
    """

    field: FieldSpec
    n: int
    basis: np.ndarray  # (n, r)

    def __post_init__(self) -> None:
        self.basis = coerce_array(self.basis, self.field)
        if self.basis.ndim != 2 or self.basis.shape[0] != self.n:
            raise ShapeError(f"basis shape {self.basis.shape} does not match n={self.n}")
        self.basis.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def projector(self) -> np.ndarray:
        """Orthogonal projector onto the subspace (complex field only)."""
        if not self.field.is_complex:
            raise FieldError("projectors are a complex-field notion")
        return self.basis @ self.basis.conj().T

    def equals(self, other: "Subspace", tol: float = 1e-9) -> bool:
        if (self.field.is_complex != other.field.is_complex) or self.n != other.n:
            return False
        if self.dim != other.dim:
            return False
        if self.field.is_complex:
            return bool(np.max(np.abs(self.projector() - other.projector()), initial=0.0) <= tol)
        return bool(np.array_equal(self.basis, other.basis))


@dataclass(frozen=True)
class Restriction:
    """The compression R B T of a matrix between a subspace and the
    annihilator of its complement: an (n - r) x r matrix."""

    field: FieldSpec
    matrix: np.ndarray

    def s2_norm(self) -> float:
        if not self.field.is_complex:
            raise FieldError("Schatten norms are a complex-field notion")
        return float(np.linalg.norm(self.matrix))

    def sp_norm(self, p: float) -> float:
        if not self.field.is_complex:
            raise FieldError("Schatten norms are a complex-field notion")
        if p < 1:
            raise ValidationError(f"Schatten index must be >= 1, got {p}")
        sv = np.linalg.svd(self.matrix, compute_uv=False) if self.matrix.size else np.zeros(0)
        if np.isinf(p):
            return float(sv[0]) if sv.size else 0.0
        return float(np.sum(sv**p) ** (1.0 / p))

    def rank(self) -> int:
        return numerical_rank(self.matrix, self.field)


def phase_fixed_qr(a: np.ndarray) -> np.ndarray:
    """Thin QR factor with each column's phase fixed so the R diagonal is
    real and positive; deterministic for full-column-rank input."""
    q, r = np.linalg.qr(a)
    diag = np.diagonal(r).copy()
    diag = np.where(np.abs(diag) < 1e-300, 1.0, diag)
    return q * (diag.conj() / np.abs(diag))


def _canonical_from_columns(cols: np.ndarray, field: FieldSpec) -> np.ndarray:
    """Canonical basis array for the span of the given columns."""
    if field.is_complex:
        if cols.shape[1] == 0:
            return np.zeros((cols.shape[0], 0), dtype=np.complex128)
        u, s, _ = np.linalg.svd(cols, full_matrices=False)
        rank = int(np.sum(s > field.rank_tol * s[0])) if s.size and s[0] > 0 else 0
        if rank == 0:
            return np.zeros((cols.shape[0], 0), dtype=np.complex128)
        proj = u[:, :rank] @ u[:, :rank].conj().T
        q, r_fac, _ = scipy.linalg.qr(proj, mode="economic", pivoting=True)
        diag = np.diagonal(r_fac)[:rank].copy()
        diag = np.where(np.abs(diag) < 1e-300, 1.0, diag)
        return q[:, :rank] * (diag.conj() / np.abs(diag))
    return kernels.gf_rcef(cols, field.p)


def canonical_basis(vectors, field: FieldSpec = COMPLEX) -> Subspace:
    """Subspace spanned by the given vectors, in canonical form.

    ``vectors`` is a sequence of length-n vectors (or a (k, n) array of
    rows). The span may be zero-dimensional; that yields an n-by-0 basis.
    """
    arr = coerce_array(np.atleast_2d(np.asarray(vectors)), field)
    if arr.ndim != 2:
        raise ShapeError(f"expected vectors of one common length, got shape {arr.shape}")
    cols = arr.T
    basis = _canonical_from_columns(cols, field)
    return Subspace(field=field, n=cols.shape[0], basis=basis)


def subspace_from_columns(cols, field: FieldSpec = COMPLEX) -> Subspace:
    """Like :func:`canonical_basis` but the input holds vectors as columns."""
    arr = coerce_array(np.asarray(cols), field)
    if arr.ndim != 2:
        raise ShapeError(f"expected a 2d array of columns, got shape {arr.shape}")
    return Subspace(field=field, n=arr.shape[0], basis=_canonical_from_columns(arr, field))


def coordinate_subspace(field: FieldSpec, n: int, indices) -> Subspace:
    """Span of the standard basis vectors e_i for i in ``indices`` (0-based)."""
    idx = sorted(set(int(i) for i in indices))
    if any(i < 0 or i >= n for i in idx):
        raise DimensionError(f"coordinate indices {idx} outside range(0, {n})")
    basis = np.zeros((n, len(idx)), dtype=field.dtype)
    for j, i in enumerate(idx):
        basis[i, j] = 1
    return Subspace(field=field, n=n, basis=basis)


def annihilator(v: Subspace) -> Subspace:
    """The dual subspace {u : <u, x> = 0 for all x in V}.

    Over the complex field the pairing is Hermitian, so this is the
    orthogonal complement; over GF(p) it is the bilinear dot-product
    annihilator, which has complementary dimension but may intersect V.
    """
    if v.field.is_complex:
        if v.dim == 0:
            basis = np.eye(v.n, dtype=np.complex128)
        elif v.dim == v.n:
            basis = np.zeros((v.n, 0), dtype=np.complex128)
        else:
            ns = scipy.linalg.null_space(v.basis.conj().T)
            basis = _canonical_from_columns(ns, v.field)
        return Subspace(field=v.field, n=v.n, basis=basis)
    ns = kernels.gf_nullspace(np.ascontiguousarray(v.basis.T), v.field.p)
    return Subspace(field=v.field, n=v.n, basis=ns)


def restrict(b: np.ndarray, v: Subspace) -> Restriction:
    """Compression of the matrix ``b`` from V into the annihilator of V,
    as an (n - r) x r matrix. Needs 1 <= dim V <= n - 1."""
    r = v.dim
    if r == 0:
        raise ZeroSubspaceError("cannot restrict to the zero subspace")
    if r >= v.n:
        raise DimensionError("restriction needs a proper subspace")
    b = coerce_array(b, v.field)
    if b.shape != (v.n, v.n):
        raise ShapeError(f"matrix shape {b.shape} does not match n={v.n}")
    comp = annihilator(v)
    if v.field.is_complex:
        rmat = comp.basis.conj().T
        return Restriction(field=v.field, matrix=rmat @ b @ v.basis)
    rmat = comp.basis.T
    return Restriction(field=v.field, matrix=rmat @ b % v.field.p @ v.basis % v.field.p)


def numerical_rank(m: np.ndarray, field: FieldSpec = COMPLEX, tol: float | None = None) -> int:
    """Rank of a matrix: exact over GF(p); over the complex field, count of
    singular values above tol * max(1, sigma_max).

    The absolute anchor matters: the matrices seen here (restrictions and
    span stacks of unit-scale tuples) are O(1) by construction, so a
    product that is pure roundoff must rank as zero rather than having its
    noise floor mistaken for signal by a purely relative cutoff.
    """
    m = coerce_array(np.atleast_2d(m), field)
    if m.size == 0:
        return 0
    if field.is_complex:
        sv = np.linalg.svd(m, compute_uv=False)
        if sv.size == 0 or sv[0] == 0.0:
            return 0
        cutoff = (field.rank_tol if tol is None else tol) * max(1.0, sv[0])
        return int(np.sum(sv > cutoff))
    return int(kernels.gf_rank(np.ascontiguousarray(m), field.p))


def validate_doubly_stochastic(b: MatrixTuple, tol: float = 1e-8) -> bool:
    """True when sum_i B_i B_i* = sum_i B_i* B_i = d I within ``tol``."""
    if not b.field.is_complex:
        raise FieldError("double stochasticity is defined over the complex field")
    key = ("ds", tol)
    if key not in b._cache:
        target = b.d * np.eye(b.n)
        left = np.einsum("iab,icb->ac", b.mats, b.mats.conj())
        right = np.einsum("iba,ibc->ac", b.mats.conj(), b.mats)
        dev = max(np.max(np.abs(left - target)), np.max(np.abs(right - target)))
        b._cache[key] = bool(dev <= tol)
    return b._cache[key]


def validate_unitary(b: MatrixTuple, tol: float = 1e-8) -> bool:
    """True when every member matrix is unitary within ``tol``."""
    if not b.field.is_complex:
        raise FieldError("unitarity is defined over the complex field")
    key = ("unitary", tol)
    if key not in b._cache:
        gram = np.einsum("iba,ibc->iac", b.mats.conj(), b.mats)
        dev = np.max(np.abs(gram - np.eye(b.n)))
        b._cache[key] = bool(dev <= tol)
    return b._cache[key]


def subspace_image(b: MatrixTuple, v: Subspace) -> Subspace:
    """The subspace B(V) spanned by all B_i x for x in V."""
    if (b.field.is_complex != v.field.is_complex) or (
        not b.field.is_complex and b.field.p != v.field.p
    ):
        raise FieldError(f"tuple over {b.field} but subspace over {v.field}")
    if b.n != v.n:
        raise ShapeError(f"tuple acts on F^{b.n}, subspace lives in F^{v.n}")
    cols = np.hstack([b.mats[i] @ v.basis for i in range(b.d)])
    if not b.field.is_complex:
        cols %= b.field.p
    return Subspace(field=b.field, n=b.n, basis=_canonical_from_columns(cols, b.field))


def random_subspace(field: FieldSpec, n: int, r: int, rng: np.random.Generator) -> Subspace:
    """A random r-dimensional subspace: Haar-distributed over the complex
    field, uniform over GF(p) (rejection until full rank)."""
    if not (0 <= r <= n):
        raise DimensionError(f"dimension {r} outside [0, {n}]")
    if r == 0:
        return Subspace(field=field, n=n, basis=np.zeros((n, 0), dtype=field.dtype))
    if field.is_complex:
        g = rng.standard_normal((n, r)) + 1j * rng.standard_normal((n, r))
        return subspace_from_columns(phase_fixed_qr(g), field)
    while True:
        cand = rng.integers(0, field.p, size=(n, r)).astype(np.int64)
        if kernels.gf_rank(cand, field.p) == r:
            return subspace_from_columns(cand, field)


def random_tuple(field: FieldSpec, n: int, d: int, rng: np.random.Generator) -> MatrixTuple:
    """A tuple with independent uniform (GF(p)) or standard Gaussian
    (complex) entries. Test and suite fodder, not doubly stochastic."""
    if field.is_complex:
        mats = rng.standard_normal((d, n, n)) + 1j * rng.standard_normal((d, n, n))
        return MatrixTuple(field=field, n=n, mats=mats)
    return MatrixTuple(field=field, n=n, mats=rng.integers(0, field.p, size=(d, n, n)))


def seeded_subspace(field: FieldSpec, n: int, r: int, seed: int, *labels) -> Subspace:
    return random_subspace(field, n, r, spawn_rng(seed, "subspace", *labels))
