"""Tuple constructions: graph-derived tuples, fractional unitary powers,
Haar tuples, localized tuples, identity tuples.

Fractional powers use the principal Hermitian logarithm (eigenphases in
(-pi, pi], ties at -pi resolved to +pi) so that ``U^s`` is deterministic
and ``norm(H) <= pi``; the branch choice is recorded in tuple metadata.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .core import MatrixTuple, make_tuple, phase_fixed_qr, validate_unitary
from .errors import ConfigError, FieldError, InternalError, SamplingError, ValidationError
from .fields import COMPLEX, FieldSpec
from .graph import Graph
from .rng import spawn_rng

__all__ = [
    "HermitianLog",
    "graphical_tuple",
    "hermitian_log",
    "fractional_power",
    "tuple_power",
    "haar_unitary_tuple",
    "identity_tuple",
    "sample_localized_unitary",
    "localized_unitary_tuple",
]


def graphical_tuple(
    g: Graph, field: FieldSpec = COMPLEX, normalized: bool | None = None
) -> MatrixTuple:
    """Tuple with one matrix sqrt(n)*E_{u,v} per ordered adjacent pair.

    The scaling makes the complex version doubly stochastic; over a prime
    field the scaling is dropped (rank objectives do not see it) and
    requesting it raises FieldError. Arcs are ordered lexicographically.
    """
    if normalized is None:
        normalized = field.is_complex
    if normalized and not field.is_complex:
        raise FieldError("the sqrt(n) scaling only makes sense over the complex field")
    degree = g.regular_degree()
    n = g.n
    if field.is_complex:
        mats = np.zeros((n * degree, n, n), dtype=np.complex128)
        value = np.sqrt(n) if normalized else 1.0
    else:
        mats = np.zeros((n * degree, n, n), dtype=np.int64)
        value = 1
    k = 0
    for u in range(1, n + 1):
        for v in g.neighbors(u):
            mats[k, u - 1, v - 1] = value
            k += 1
    assert k == n * degree
    meta = {
        "kind": "graphical",
        "degree": degree,
        "normalized": bool(normalized),
        "edges": tuple(g.edges),
    }
    return make_tuple(mats, field=field, meta=meta)


@dataclass(frozen=True)
class HermitianLog:
    """Principal-branch Hermitian logarithm of a unitary: U = exp(iH)."""

    H: np.ndarray
    eigenphases: np.ndarray
    eigenvectors: np.ndarray


def hermitian_log(u: np.ndarray) -> HermitianLog:
    """Hermitian H with exp(iH) = U, eigenphases in (-pi, pi].

    Uses the complex Schur form, which is diagonal for a unitary matrix,
    so the Schur vectors are an orthonormal eigenbasis.
    """
    u = np.asarray(u, dtype=np.complex128)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {u.shape}")
    n = u.shape[0]
    defect = np.abs(u.conj().T @ u - np.eye(n)).max()
    if defect > 1e-9:
        raise ValidationError(f"matrix is not unitary (defect {defect:.3e})")
    t, z = scipy.linalg.schur(u, output="complex")
    theta = np.angle(np.diagonal(t))
    theta = np.where(theta <= -np.pi, theta + 2 * np.pi, theta)
    h = (z * theta) @ z.conj().T
    h = (h + h.conj().T) / 2
    return HermitianLog(H=h, eigenphases=theta, eigenvectors=z)


def _power_from_log(log: HermitianLog, s: float) -> np.ndarray:
    z = log.eigenvectors
    return (z * np.exp(1j * s * log.eigenphases)) @ z.conj().T


def fractional_power(u: np.ndarray, s: float) -> np.ndarray:
    """U^s = exp(isH) on the principal branch; s = 1 reproduces U."""
    return _power_from_log(hermitian_log(u), float(s))


def _tuple_logs(b: MatrixTuple) -> list[HermitianLog]:
    logs = b._cache.get("hermitian_logs")
    if logs is None:
        logs = [hermitian_log(b.mats[i]) for i in range(b.d)]
        b._cache["hermitian_logs"] = logs
    return logs


def tuple_power(b: MatrixTuple, s: float) -> MatrixTuple:
    """Elementwise fractional power of a unitary tuple (logs cached)."""
    if not b.field.is_complex:
        raise FieldError("fractional powers require a complex unitary tuple")
    if not validate_unitary(b):
        raise ValidationError("tuple_power needs every matrix unitary")
    logs = _tuple_logs(b)
    mats = np.stack([_power_from_log(log, float(s)) for log in logs])
    meta = dict(b.meta)
    meta.update({"power_s": float(s), "log_branch": "principal"})
    return make_tuple(mats, field=b.field, meta=meta)


def haar_unitary_tuple(n: int, d: int, seed: int = 0) -> MatrixTuple:
    """d independent Haar unitaries (QR of complex Gaussians with the R
    diagonal made real positive); bitwise deterministic per seed."""
    rng = spawn_rng(seed, "haar", n, d)
    mats = np.empty((d, n, n), dtype=np.complex128)
    for i in range(d):
        g = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
        mats[i] = phase_fixed_qr(g)
    return make_tuple(mats, field=COMPLEX, meta={"kind": "haar", "seed": int(seed)})


def identity_tuple(n: int, d: int, field: FieldSpec = COMPLEX) -> MatrixTuple:
    """d copies of the identity; the degenerate baseline and the
    augmentation tuple used in the rank-chain comparison."""
    if field.is_complex:
        mats = np.broadcast_to(np.eye(n, dtype=np.complex128), (d, n, n)).copy()
    else:
        mats = np.broadcast_to(np.eye(n, dtype=np.int64), (d, n, n)).copy()
    return make_tuple(mats, field=field, meta={"kind": "identity"})


def _sample_localized(n: int, eps: float, rng: np.random.Generator, max_attempts: int = 1000):
    gamma = eps / 4
    for _ in range(max_attempts):
        g = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
        m = phase_fixed_qr(np.eye(n) + gamma * g)
        if np.abs(np.diagonal(m)).min() > 1 - eps:
            return m
        gamma *= 0.7
    raise SamplingError(f"no localized unitary found in {max_attempts} attempts (eps={eps})")


def sample_localized_unitary(n: int, eps: float, seed: int = 0) -> np.ndarray:
    """One unitary whose j-th column stays within eps of e_j in overlap:
    |M[j,j]| > 1 - eps for all j. Perturb-and-reject around the identity."""
    if not 0 < eps < 1:
        raise ConfigError(f"eps must lie in (0, 1), got {eps}")
    rng = spawn_rng(seed, "localized-sample", n)
    return _sample_localized(n, eps, rng)


def localized_unitary_tuple(n: int, d: int, eps: float, seed: int = 0) -> MatrixTuple:
    """U_i = M_i D_i M_i* with localized M_i and uniform random phases D_i.

    Each U_i is unitary with the same localized eigenbasis for all its
    fractional powers, which keeps e_1 nearly fixed at every power.
    """
    if not 0 < eps < 1:
        raise ConfigError(f"eps must lie in (0, 1), got {eps}")
    mats = np.empty((d, n, n), dtype=np.complex128)
    for i in range(d):
        rng = spawn_rng(seed, "localized", i)
        m = _sample_localized(n, eps, rng)
        phases = np.exp(2j * np.pi * rng.random(n))
        mats[i] = (m * phases) @ m.conj().T
    out = make_tuple(mats, field=COMPLEX, meta={"kind": "localized", "eps": float(eps)})
    if not validate_unitary(out):
        raise InternalError("localized construction produced a non-unitary tuple")
    return out
