"""Dense vectors and matrices over a scalar domain.

Vectors and matrices are plain numpy arrays (``float64`` for the two ordered
domains, ``complex128`` for the complex field); the domain travels as an
explicit argument.  Max-times products go through the kernel backend.
"""

from __future__ import annotations

from typing import Iterable

import numpy as np

from ._backend import kernels
from .domains import Domain
from .errors import (
    DimensionError,
    DomainError,
    InputError,
    UndefinedResidualError,
    UnsupportedDomainError,
)

DEFAULT_TOL = 1e-9


def as_vector(x, domain: Domain | str = Domain.MAX_TIMES) -> np.ndarray:
    domain = Domain.parse(domain)
    arr = np.asarray(x)
    if arr.ndim != 1 or arr.shape[0] < 1:
        raise DimensionError(f"expected a nonempty vector, got shape {arr.shape}")
    return _coerce(arr, domain)


def as_matrix(A, domain: Domain | str = Domain.MAX_TIMES) -> np.ndarray:
    domain = Domain.parse(domain)
    arr = np.asarray(A)
    if arr.ndim != 2 or 0 in arr.shape:
        raise DimensionError(f"expected a nonempty matrix, got shape {arr.shape}")
    return _coerce(arr, domain)


def _coerce(arr: np.ndarray, domain: Domain) -> np.ndarray:
    if domain is Domain.COMPLEX:
        out = np.ascontiguousarray(arr, dtype=np.complex128)
        if not np.all(np.isfinite(out)):
            raise DomainError("complex entries must be finite")
        return out
    if np.iscomplexobj(arr):
        if np.any(arr.imag != 0):
            raise DomainError(f"complex entries are not allowed in domain {domain}")
        arr = arr.real
    out = np.ascontiguousarray(arr, dtype=np.float64)
    if not np.all(np.isfinite(out)):
        raise DomainError("entries must be finite")
    if np.any(out < 0):
        raise DomainError(f"negative entry in domain {domain}")
    return out


def identity(n: int, domain: Domain | str = Domain.MAX_TIMES) -> np.ndarray:
    return np.eye(n, dtype=Domain.parse(domain).dtype)


def mat_vec(A, x, domain: Domain | str = Domain.MAX_TIMES) -> np.ndarray:
    """Product ``A x`` with the domain's addition and multiplication."""
    domain = Domain.parse(domain)
    A, x = as_matrix(A, domain), as_vector(x, domain)
    if A.shape[1] != x.shape[0]:
        raise DimensionError(f"cannot apply {A.shape} matrix to length-{x.shape[0]} vector")
    if domain is Domain.MAX_TIMES:
        return kernels.mt_matvec(A, x)
    return A @ x


def mat_mul(A, B, domain: Domain | str = Domain.MAX_TIMES) -> np.ndarray:
    domain = Domain.parse(domain)
    A, B = as_matrix(A, domain), as_matrix(B, domain)
    if A.shape[1] != B.shape[0]:
        raise DimensionError(f"cannot multiply {A.shape} by {B.shape}")
    if domain is Domain.MAX_TIMES:
        return kernels.mt_matmul(A, B)
    return A @ B


def mat_power(A, t: int, domain: Domain | str = Domain.MAX_TIMES) -> np.ndarray:
    """``t``-fold product of ``A``; ``t = 0`` gives the identity."""
    domain = Domain.parse(domain)
    A = as_matrix(A, domain)
    if A.shape[0] != A.shape[1]:
        raise DimensionError(f"matrix power needs a square matrix, got {A.shape}")
    if t < 0:
        raise ValueError("exponent must be nonnegative")
    result = identity(A.shape[0], domain)
    base = A
    while t:
        if t & 1:
            result = mat_mul(result, base, domain)
        t >>= 1
        if t:
            base = mat_mul(base, base, domain)
    return result


def mat_add(A, B, domain: Domain | str = Domain.MAX_TIMES) -> np.ndarray:
    domain = Domain.parse(domain)
    if domain is Domain.MAX_TIMES:
        return np.maximum(A, B)
    return A + B


def residual(v, w, domain: Domain | str = Domain.MAX_TIMES) -> float:
    """Largest ``lam`` with ``lam * w <= v``: the minimum of ``v_i / w_i`` over ``w_i != 0``."""
    domain = Domain.parse(domain)
    if domain is Domain.COMPLEX:
        raise UnsupportedDomainError("residuation needs an ordered domain")
    v, w = as_vector(v, domain), as_vector(w, domain)
    if v.shape != w.shape:
        raise DimensionError(f"length mismatch {v.shape[0]} vs {w.shape[0]}")
    r = kernels.mt_residual(v, w)
    if r != r:
        raise UndefinedResidualError("residual against the zero vector is undefined")
    return r


def sup_of(vs: Iterable) -> np.ndarray:
    """Componentwise maximum of a finite nonempty family of vectors."""
    vs = [np.asarray(v, dtype=np.float64) for v in vs]
    if not vs:
        raise InputError("sup of an empty family")
    shapes = {v.shape for v in vs}
    if len(shapes) != 1:
        raise DimensionError(f"mixed vector lengths {sorted(shapes)}")
    return np.max(np.stack(vs), axis=0)


def max_norm(x) -> float:
    x = np.asarray(x)
    return float(np.max(np.abs(x))) if x.size else 0.0


def close(a, b, tol: float = DEFAULT_TOL) -> bool:
    """Relative max-norm comparison ``|a-b| <= tol * max(1, |a|, |b|)``."""
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape:
        return False
    return max_norm(a - b) <= tol * max(1.0, max_norm(a), max_norm(b))


def eig_residual(A, v, lam, domain: Domain | str = Domain.MAX_TIMES) -> float:
    """Scale-aware eigen-residual ``|Av - lam v| / (max(1, |lam|) |v|)`` in max norm."""
    v = np.asarray(v)
    nv = max_norm(v)
    if nv == 0:
        return float("inf")
    r = max_norm(mat_vec(A, v, domain) - lam * v)
    return r / (max(1.0, abs(lam)) * nv)


def eigenvalue_of(A, v, domain: Domain | str = Domain.MAX_TIMES):
    """Eigenvalue read off at the largest coordinate of ``v``."""
    domain = Domain.parse(domain)
    v = np.asarray(v)
    i = int(np.argmax(np.abs(v)))
    lam = mat_vec(A, v, domain)[i] / v[i]
    if domain is Domain.COMPLEX:
        return complex(lam)
    return max(float(np.real(lam)), 0.0)


def normalize(v) -> np.ndarray:
    """Scale so the entry of largest modulus equals one exactly."""
    v = np.asarray(v)
    i = int(np.argmax(np.abs(v)))
    if v[i] == 0:
        return v.copy()
    return v / v[i]


class EigenPair:
    """Eigenvalue, eigenvector, verified residual and the solver path that produced them."""

    __slots__ = ("lam", "vector", "residual", "method", "info")

    METHODS = ("kleene-star", "induced", "shpiz", "power", "classical", "lifted")

    def __init__(self, lam, vector, residual, method, info=None):
        if method not in self.METHODS:
            raise ValueError(f"unknown method {method!r}")
        self.lam = lam
        self.vector = np.asarray(vector)
        self.residual = float(residual)
        self.method = method
        self.info = info or {}

    def __repr__(self):
        return (
            f"EigenPair(lam={self.lam!r}, vector={self.vector!r}, "
            f"residual={self.residual:.3g}, method={self.method!r})"
        )

    def __iter__(self):
        yield self.lam
        yield self.vector


def make_eigenpair(A, v, lam, method, domain=Domain.MAX_TIMES, tol=DEFAULT_TOL, info=None):
    """Normalize ``v``, measure the residual and refuse anything above ``tol``."""
    from .errors import InvariantViolationError

    v = normalize(v)
    r = eig_residual(A, v, lam, domain)
    if not r <= tol:
        raise InvariantViolationError(f"eigenpair failed verification: residual {r:.3g} > {tol:g}")
    return EigenPair(lam, v, r, method, info)
