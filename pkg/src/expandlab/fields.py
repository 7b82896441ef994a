"""Scalar fields: the complex numbers in floating point, or a prime field."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import FieldError


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """A scalar field.

    ``p is None`` means the complex numbers represented in complex128, with
    ``rank_tol`` the relative singular-value cutoff used by rank decisions.
    Otherwise the field is GF(p) with exact integer arithmetic mod p.
    """

    p: int | None = None
    rank_tol: float = 1e-9

    def __post_init__(self) -> None:
        if self.p is not None and not is_prime(self.p):
            raise FieldError(f"{self.p} is not prime")
        if not (0.0 < self.rank_tol < 1.0):
            raise FieldError(f"rank_tol {self.rank_tol} outside (0, 1)")

    @property
    def is_complex(self) -> bool:
        return self.p is None

    @property
    def dtype(self) -> np.dtype:
        return np.dtype(np.complex128 if self.p is None else np.int64)

    def __str__(self) -> str:
        return "complex" if self.p is None else f"GF({self.p})"


COMPLEX = FieldSpec()
GF2 = FieldSpec(p=2)


def prime_field(p: int) -> FieldSpec:
    return FieldSpec(p=p)


def coerce_array(a, field: FieldSpec) -> np.ndarray:
    """Cast ``a`` to the field's dtype, refusing lossy casts.

    Complex-valued data cannot enter a prime field; prime-field arrays are
    reduced mod p. Float arrays over GF(p) are accepted only if integral.
    """
    arr = np.asarray(a)
    if field.is_complex:
        if not np.issubdtype(arr.dtype, np.number):
            raise FieldError(f"non-numeric dtype {arr.dtype}")
        return arr.astype(np.complex128)
    if np.issubdtype(arr.dtype, np.complexfloating):
        if np.any(arr.imag != 0):
            raise FieldError("complex values cannot be reduced into a prime field")
        arr = arr.real
    if np.issubdtype(arr.dtype, np.floating):
        if not np.all(arr == np.round(arr)):
            raise FieldError("non-integer values cannot be reduced into a prime field")
        arr = np.round(arr)
    if not np.issubdtype(np.asarray(arr).dtype, np.number):
        raise FieldError(f"non-numeric dtype {arr.dtype}")
    return np.mod(arr.astype(np.int64), field.p)
