"""Finitely generated max cones in the nonnegative orthant.

A cone is stored by its generator matrix ``G`` (one generator per column) and
denotes every max-combination ``G ⊗ u`` with ``u >= 0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ._backend import kernels
from .dense import DEFAULT_TOL, as_matrix, as_vector, mat_mul, mat_vec, max_norm
from .domains import Domain
from .errors import DimensionError, InputError, NotInvariantError, ZeroImageError

MT = Domain.MAX_TIMES


@dataclass(frozen=True)
class MaxCone:
    generators: np.ndarray

    def __post_init__(self):
        G = as_matrix(self.generators, MT)
        if np.any(G.max(axis=0) == 0):
            raise InputError("max cone generators must be nonzero")
        G.setflags(write=False)
        object.__setattr__(self, "generators", G)

    @classmethod
    def from_generators(cls, G, *, reduce: bool = True, tol: float = DEFAULT_TOL) -> "MaxCone":
        """Build a cone, dropping zero columns and (optionally) redundant ones."""
        G = as_matrix(G, MT)
        G = G[:, G.max(axis=0) > 0]
        if G.shape[1] == 0:
            raise InputError("a max cone needs at least one nonzero generator")
        if reduce:
            G = reduce_generators(G, tol)
        return cls(G)

    @classmethod
    def orthant(cls, n: int) -> "MaxCone":
        return cls(np.eye(n))

    @classmethod
    def ray(cls, g) -> "MaxCone":
        return cls(as_vector(g, MT)[:, None])

    @property
    def dim(self) -> int:
        return self.generators.shape[0]

    @property
    def size(self) -> int:
        return self.generators.shape[1]

    def __eq__(self, other):
        return isinstance(other, MaxCone) and np.array_equal(self.generators, other.generators)

    def __hash__(self):
        return hash(self.generators.tobytes())


@dataclass(frozen=True)
class SliceSample:
    point: np.ndarray
    weights: np.ndarray
    basepoints: list = field(default_factory=list)


def _project(G: np.ndarray, y: np.ndarray) -> np.ndarray:
    return kernels.mt_project(np.asfortranarray(G), np.ascontiguousarray(y))


def _member(G: np.ndarray, x: np.ndarray, tol: float) -> bool:
    nx = max_norm(x)
    if nx == 0:
        return True
    return max_norm(_project(G, x) - x) <= tol * nx


def reduce_generators(G: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Drop every generator lying in the cone of the remaining ones."""
    keep = list(range(G.shape[1]))
    for j in range(G.shape[1]):
        others = [k for k in keep if k != j]
        if others and _member(G[:, others], G[:, j], tol):
            keep = others
    return np.ascontiguousarray(G[:, keep])


def project(W: MaxCone, y) -> np.ndarray:
    """Greatest element of ``W`` below ``y``: ``⊕_j [y:g_j] g_j``."""
    y = as_vector(y, MT)
    if y.shape[0] != W.dim:
        raise DimensionError(f"vector of length {y.shape[0]} against cone in dimension {W.dim}")
    return _project(W.generators, y)


def member(W: MaxCone, x, tol: float = DEFAULT_TOL) -> bool:
    x = as_vector(x, MT)
    if x.shape[0] != W.dim:
        raise DimensionError(f"vector of length {x.shape[0]} against cone in dimension {W.dim}")
    return _member(W.generators, x, tol)


def _check_square(W: MaxCone, A) -> np.ndarray:
    A = as_matrix(A, MT)
    if A.shape != (W.dim, W.dim):
        raise DimensionError(f"operator of shape {A.shape} on a cone in dimension {W.dim}")
    return A


def is_invariant(W: MaxCone, A, tol: float = DEFAULT_TOL) -> bool:
    """Whether ``A ⊗ W ⊆ W``; by max-linearity it suffices to test generators."""
    A = _check_square(W, A)
    AG = mat_mul(A, W.generators)
    return all(_member(W.generators, AG[:, j], tol) for j in range(W.size))


def induced_matrix(W: MaxCone, A, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Matrix ``B`` with ``G ⊗ B = A ⊗ G``, where ``b_kj = [A g_j : g_k]``.

    Eigenpairs ``(lam, u)`` of ``B`` give eigenpairs ``(lam, G ⊗ u)`` of ``A``.
    """
    A = _check_square(W, A)
    G = W.generators
    AG = mat_mul(A, G)
    m = G.shape[1]
    B = np.empty((m, m))
    cols, imgs = np.ascontiguousarray(G.T), np.ascontiguousarray(AG.T)
    for j in range(m):
        for k in range(m):
            B[k, j] = kernels.mt_residual(imgs[j], cols[k])
    GB = mat_mul(G, B)
    for j in range(m):
        scale = max_norm(AG[:, j])
        if max_norm(GB[:, j] - AG[:, j]) > tol * scale:
            raise NotInvariantError(
                f"cone is not invariant: image of generator {j} leaves the cone"
            )
    return B


def greatest_slice_point(W: MaxCone) -> np.ndarray:
    """Greatest element of ``{x in W : max_i x_i = 1}``."""
    G = W.generators
    norms = G.max(axis=0)
    if np.any(norms == 0):
        raise InputError("zero generator")
    return (G / norms[None, :]).max(axis=1)


def convex_sample(W: MaxCone, weights, indices: Sequence[int], tol: float = DEFAULT_TOL) -> SliceSample:
    """Ordinary convex combination of sum-normalized generators."""
    weights = np.asarray(weights, dtype=np.float64)
    indices = list(indices)
    if weights.ndim != 1 or len(indices) != weights.shape[0] or not indices:
        raise InputError("one weight per selected generator is required")
    if np.any(weights < 0) or abs(weights.sum() - 1.0) > tol:
        raise InputError("weights must be nonnegative and sum to one")
    basepoints = [W.generators[:, j] / W.generators[:, j].sum() for j in indices]
    point = np.zeros(W.dim)
    for mu, x in zip(weights, basepoints):
        point = point + mu * x
    return SliceSample(point=point, weights=weights, basepoints=basepoints)


def gamma_pi_step(W: MaxCone, A, x) -> np.ndarray:
    """One application of ``γ∘π`` on the convex hull of the slice.

    ``π`` projects onto ``W`` and rescales to coordinate-sum one; ``γ`` applies
    ``A`` and rescales the same way.  Fixed points are eigenvectors of ``A``.
    """
    A = _check_square(W, A)
    p = project(W, x)
    s = p.sum()
    if s <= 0:
        raise InputError("projection vanished; the point is not in the convex hull of the slice")
    y = mat_vec(A, p / s)
    t = y.sum()
    if t <= 0:
        raise ZeroImageError("A annihilates the projected point; it is a zero-eigenvalue eigenvector")
    return y / t


def invariant_hull(
    W: MaxCone,
    operators: Sequence,
    *,
    max_generators: int = 12,
    tol: float = DEFAULT_TOL,
) -> MaxCone | None:
    """Smallest cone containing ``W`` and closed under ``operators``.

    Generators are augmented with their images until stable.  Returns ``None``
    when the generator count would exceed ``max_generators``.
    """
    ops = [as_matrix(A, MT) for A in operators]
    G = W.generators
    while True:
        grew = False
        for A in ops:
            AG = mat_mul(A, G)
            for j in range(AG.shape[1]):
                h = AG[:, j]
                hn = h.max()
                if hn == 0 or _member(G, h, tol):
                    continue
                G = reduce_generators(np.column_stack([G, h / hn]), tol)
                grew = True
                if G.shape[1] > max_generators:
                    return None
        if not grew:
            return MaxCone(G)
