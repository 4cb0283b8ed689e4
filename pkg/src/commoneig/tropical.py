"""Max-times spectral theory and the constructive eigenvector-in-cone solvers."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.sparse.csgraph import connected_components

from ._backend import kernels
from .cones import MaxCone, greatest_slice_point, induced_matrix, is_invariant, reduce_generators
from .dense import (
    DEFAULT_TOL,
    EigenPair,
    as_matrix,
    identity,
    make_eigenpair,
    mat_mul,
    mat_vec,
    max_norm,
)
from .domains import Domain
from .errors import (
    DimensionError,
    DivergenceError,
    InvariantViolationError,
    NotInvariantError,
    ZeroEigenvalueError,
    ZeroImageError,
)

MT = Domain.MAX_TIMES


@dataclass(frozen=True)
class SpectralCertificate:
    cycle: list = field(default_factory=list)
    mean: float = 0.0


@dataclass(frozen=True)
class ShpizTrace:
    alpha1: float
    iterations: int
    limit: np.ndarray
    converged_to_zero: bool
    monotone: bool = True


def _square(A) -> np.ndarray:
    A = as_matrix(A, MT)
    if A.shape[0] != A.shape[1]:
        raise DimensionError(f"expected a square matrix, got {A.shape}")
    return A


def _log_weights(A: np.ndarray) -> np.ndarray:
    logw = np.full(A.shape, -np.inf)
    mask = A > 0
    logw[mask] = np.log2(A[mask])
    return logw


def _walk_cycles(P: np.ndarray, v: int, n: int):
    """Cycles on the back-traced ``n``-arc walk ending at ``v``."""
    walk = [v]
    for k in range(n, 0, -1):
        walk.append(int(P[k, walk[-1]]))
    walk.reverse()  # walk[0] -> walk[1] -> ... -> walk[n]
    last = {}
    for pos, node in enumerate(walk):
        if node in last:
            yield walk[last[node]:pos]
        last[node] = pos


def _cycle_log_mean(logw: np.ndarray, cycle) -> float:
    L = len(cycle)
    return sum(logw[cycle[i], cycle[(i + 1) % L]] for i in range(L)) / L


def max_cycle_mean(A) -> tuple[float, SpectralCertificate]:
    """Maximum geometric cycle mean of the weighted digraph of ``A``.

    Karp's algorithm on base-2 logarithms of the nonzero entries; zero
    entries are absent arcs.  Returns ``(0.0, empty certificate)`` for an
    acyclic digraph.
    """
    A = _square(A)
    n = A.shape[0]
    logw = _log_weights(A)
    D, P = kernels.karp_tables(logw)
    best, best_v = -np.inf, -1
    for v in range(n):
        if D[n, v] == -np.inf:
            continue
        worst = np.inf
        for k in range(n):
            if D[k, v] > -np.inf:
                worst = min(worst, (D[n, v] - D[k, v]) / (n - k))
        if worst > best:
            best, best_v = worst, v
    if best_v < 0:
        return 0.0, SpectralCertificate()
    lam = float(2.0**best)
    cycle = None
    for c in _walk_cycles(P, best_v, n):
        if abs(_cycle_log_mean(logw, c) - best) <= 1e-12 * max(1.0, abs(best)):
            cycle = c
            break
    if cycle is None:
        cycle = _critical_cycle(A, lam)
    k = cycle.index(min(cycle))
    cycle = cycle[k:] + cycle[:k]
    return lam, SpectralCertificate(cycle=cycle, mean=lam)


def _critical_cycle(A: np.ndarray, lam: float) -> list:
    """Follow tight arcs of ``A/lam`` from a critical node back to itself."""
    B = A / lam
    S = _star(B)
    BS = mat_mul(B, S)
    i = int(np.argmax(np.diag(BS)))
    cycle, node = [i], i
    while True:
        # next hop on a best closed walk through i
        nxt = int(np.argmax(B[node] * S[:, i]))
        if nxt == i or len(cycle) > A.shape[0]:
            break
        cycle.append(nxt)
        node = nxt
    return cycle


def _star(B: np.ndarray) -> np.ndarray:
    n = B.shape[0]
    S = identity(n)
    Pw = identity(n)
    for _ in range(1, n):
        Pw = mat_mul(Pw, B)
        S = np.maximum(S, Pw)
    return S


def kleene_star(A, tol: float = DEFAULT_TOL) -> np.ndarray:
    """``I ⊕ A ⊕ ... ⊕ A^{n-1}``; requires the max cycle mean to be at most one."""
    A = _square(A)
    lam, _ = max_cycle_mean(A)
    if lam > 1.0 + tol:
        raise DivergenceError(f"max cycle mean {lam:g} > 1: the star series diverges")
    return _star(A)


def critical_nodes(A, lam: float | None = None, tol: float = DEFAULT_TOL) -> list:
    """Nodes lying on a cycle whose geometric mean equals ``lam`` (default: the max)."""
    A = _square(A)
    if lam is None:
        lam, _ = max_cycle_mean(A)
    if lam <= 0:
        return []
    B = A / lam
    d = np.diag(mat_mul(B, _star(B)))
    return [i for i in range(A.shape[0]) if d[i] >= 1.0 - tol]


def principal_eigencone(A, tol: float = DEFAULT_TOL) -> MaxCone:
    """Cone of eigenvectors for the max cycle mean: critical columns of ``(A/λ)*``."""
    A = _square(A)
    lam, _ = max_cycle_mean(A)
    if lam <= 0:
        raise ZeroEigenvalueError("max cycle mean is zero; use zero_eigenvectors")
    return _eigencone_at(A, lam, tol)


def _eigencone_at(A: np.ndarray, lam: float, tol: float) -> MaxCone:
    B = A / lam
    S = _star(B)
    d = np.diag(mat_mul(B, S))
    crit = [i for i in range(A.shape[0]) if d[i] >= 1.0 - tol]
    if not crit:
        raise InvariantViolationError("no critical node for the principal eigenvalue")
    G = S[:, crit]
    G = G / G.max(axis=0)[None, :]
    AG = mat_mul(A, G)
    for j in range(G.shape[1]):
        if max_norm(AG[:, j] - lam * G[:, j]) > tol * max(1.0, lam):
            raise InvariantViolationError("critical star column failed the eigen-equation")
    return MaxCone(reduce_generators(G, tol))


def zero_eigenvectors(A) -> MaxCone | None:
    """Cone of nonzero ``x`` with ``A ⊗ x = 0``: supports inside the zero columns."""
    A = _square(A)
    zero_cols = np.flatnonzero(A.max(axis=0) == 0)
    if zero_cols.size == 0:
        return None
    return MaxCone(np.eye(A.shape[0])[:, zero_cols])


def strong_components(A) -> np.ndarray:
    """Label of the strongly connected component of every node of the digraph of ``A``."""
    _, labels = connected_components(np.asarray(A) != 0, directed=True, connection="strong")
    return labels


def _reach(A: np.ndarray) -> np.ndarray:
    """``R[i, j]``: node ``j`` is reachable from ``i`` (reflexively)."""
    n = A.shape[0]
    R = (A != 0) | np.eye(n, dtype=bool)
    for _ in range(max(1, int(np.ceil(np.log2(n))) + 1)):
        R = (R.astype(np.int64) @ R.astype(np.int64)) > 0
    return R


def _class_means(A: np.ndarray):
    labels = strong_components(A)
    means = {}
    for c in np.unique(labels):
        idx = np.flatnonzero(labels == c)
        means[int(c)] = max_cycle_mean(A[np.ix_(idx, idx)])[0]
    return labels, means


def eigencone(A, lam: float, tol: float = DEFAULT_TOL) -> tuple[float, MaxCone] | None:
    """All eigenvectors for ``lam`` as a max cone, or ``None`` if ``lam`` is not an eigenvalue.

    Supports of eigenvectors are closed under predecessors, so they avoid every
    node reachable from a class with larger cycle mean.  On the remaining nodes
    ``lam`` must be the max cycle mean, and the principal eigencone there is
    the answer.  Returns the eigenvalue as recomputed on that restriction.
    """
    A = _square(A)
    if lam <= tol:
        W = zero_eigenvectors(A)
        return None if W is None else (0.0, W)
    labels, means = _class_means(A)
    node_mean = np.array([means[int(c)] for c in labels])
    heavy = node_mean > lam * (1.0 + tol)
    R = _reach(A)
    U = np.flatnonzero(~(R[heavy].any(axis=0))) if heavy.any() else np.arange(A.shape[0])
    if U.size == 0:
        return None
    sub = A[np.ix_(U, U)]
    mu, _ = max_cycle_mean(sub)
    if mu <= 0 or abs(mu - lam) > tol * lam:
        return None
    cone = _eigencone_at(sub, mu, tol)
    G = np.zeros((A.shape[0], cone.size))
    G[U, :] = cone.generators
    AG = mat_mul(A, G)
    if max_norm(AG - mu * G) > tol * max(1.0, mu):
        raise InvariantViolationError("restricted eigencone failed verification on the full matrix")
    return mu, MaxCone(G)


def spectral_decomposition(A, tol: float = DEFAULT_TOL) -> list[tuple[float, MaxCone]]:
    """Every eigenvalue with its full eigencone, in decreasing order."""
    A = _square(A)
    _, means = _class_means(A)
    candidates = sorted({m for m in means.values() if m > 0}, reverse=True)
    out = []
    for lam in candidates:
        if out and abs(out[-1][0] - lam) <= tol * lam:
            continue
        found = eigencone(A, lam, tol)
        if found is not None:
            out.append(found)
    W0 = zero_eigenvectors(A)
    if W0 is not None:
        out.append((0.0, W0))
    return out


def tropical_spectrum(A, tol: float = DEFAULT_TOL) -> list[float]:
    """Eigenvalues of ``A``, each confirmed by a verified eigenvector; descending."""
    return [lam for lam, _ in spectral_decomposition(A, tol)]


def eigenvector_in_cone(W: MaxCone, A, tol: float = DEFAULT_TOL) -> EigenPair:
    """An eigenvector of ``A`` inside the invariant cone ``W``.

    Works on the induced matrix ``B`` of ``A`` on the generators: the principal
    eigenvalue of ``B`` is tried first, then the rest of its spectrum.
    """
    A = _square(A)
    B = induced_matrix(W, A, tol)
    G = W.generators
    method = "kleene-star" if np.array_equal(G, np.eye(W.dim)) else "induced"
    for lam, cone in spectral_decomposition(B, tol):
        for j in range(cone.size):
            v = mat_vec(G, cone.generators[:, j])
            if v.max() == 0:
                continue
            try:
                return make_eigenpair(A, v, lam, method, MT, tol)
            except InvariantViolationError:
                continue
    raise InvariantViolationError("no eigenvalue of the induced matrix produced a verified eigenvector")


def shpiz_iterates(W: MaxCone, A):
    """Yield ``v, α⁻¹A⊗v, α⁻²A²⊗v, ...`` from the greatest slice point ``v``."""
    A = _square(A)
    u = greatest_slice_point(W)
    alpha = float(mat_vec(A, u).max())
    if alpha == 0:
        raise ZeroImageError("A annihilates the greatest slice point")
    while True:
        yield u
        u = kernels.mt_matvec(A, u) / alpha


def shpiz_iteration(W: MaxCone, A, max_iter: int = 10000, tol: float = DEFAULT_TOL):
    """Power iteration of ``α⁻¹A`` from the greatest point of the unit slice of ``W``.

    Returns an :class:`EigenPair` with eigenvalue ``α = max_i (A⊗v)_i`` if the
    non-increasing iterates settle on a nonzero vector, and a
    :class:`ShpizTrace` otherwise (``converged_to_zero`` when they vanish).
    """
    A = _square(A)
    if not is_invariant(W, A, tol):
        raise NotInvariantError("cone is not invariant under A")
    AG = mat_mul(A, W.generators)
    if np.any(AG.max(axis=0) == 0):
        raise ZeroImageError("A annihilates a generator: a zero-eigenvalue eigenvector exists")
    v = greatest_slice_point(W)
    alpha = float(mat_vec(A, v).max())
    slack = 4 * np.finfo(float).eps
    u, monotone = v, True
    stop = tol / max(1.0, alpha)
    for it in range(1, max_iter + 1):
        nxt = kernels.mt_matvec(A, u) / alpha
        if np.any(nxt > u * (1 + slack)):
            monotone = False
        diff = max_norm(nxt - u)
        u = nxt
        top = u.max()
        if top <= tol:
            return ShpizTrace(alpha, it, u, True, monotone)
        if diff <= stop * top:
            try:
                return make_eigenpair(
                    A, u, alpha, "shpiz", MT, tol, {"iterations": it, "monotone": monotone}
                )
            except InvariantViolationError:
                continue
    return ShpizTrace(alpha, max_iter, u, False, monotone)
