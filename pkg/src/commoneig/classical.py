"""Eigenpairs over the complex field and Perron vectors of nonnegative matrices."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import nnls

from .dense import (
    DEFAULT_TOL,
    EigenPair,
    as_matrix,
    eig_residual,
    make_eigenpair,
    max_norm,
    normalize,
)
from .domains import Domain
from .errors import (
    DimensionError,
    InputError,
    InvariantViolationError,
    IterationError,
    NotInvariantError,
    UnsupportedDomainError,
)
from .tropical import _reach, strong_components

C, NN = Domain.COMPLEX, Domain.NONNEG
EPS = np.finfo(float).eps
RANK_TOL = 1e-8


@dataclass(frozen=True)
class PolyCoeffs:
    """Monic polynomial, coefficients from the leading one downwards."""

    coefficients: np.ndarray
    scale: float | None = None  # size of the roots' source, e.g. a matrix norm

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=np.complex128)
        if c.ndim != 1 or c.size < 1 or c[0] != 1:
            raise InputError("polynomial must be monic with at least one coefficient")
        object.__setattr__(self, "coefficients", c)

    @property
    def degree(self) -> int:
        return self.coefficients.size - 1

    def __call__(self, z):
        out = np.zeros_like(np.asarray(z, dtype=np.complex128))
        for c in self.coefficients:
            out = out * z + c
        return out


def _square(A, domain) -> np.ndarray:
    A = as_matrix(A, domain)
    if A.shape[0] != A.shape[1]:
        raise DimensionError(f"expected a square matrix, got {A.shape}")
    return A


def char_poly(A) -> PolyCoeffs:
    """Characteristic polynomial ``det(zI - A)`` by the Faddeev–LeVerrier recurrence."""
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionError("characteristic polynomial needs a square matrix")
    A = A.astype(np.complex128)
    n = A.shape[0]
    coeffs = [1 + 0j]
    M = np.zeros_like(A)
    I = np.eye(n, dtype=np.complex128)
    for k in range(1, n + 1):
        M = A @ M + coeffs[-1] * I
        coeffs.append(-np.trace(A @ M) / k)
    return PolyCoeffs(np.array(coeffs), scale=float(np.abs(A).sum(axis=1).max()) if n else None)


def _noise(p: PolyCoeffs, z, coefficients: bool = True) -> np.ndarray:
    """Error level of ``p(z)``: Horner rounding plus coefficient perturbations.

    Coefficient ``c_k`` of a characteristic polynomial carries an error of
    order ``eps * s^k`` with ``s`` the root scale.
    """
    az = np.abs(z)
    if p.scale:
        s = p.scale
    else:
        s = max(1.0, float(np.max(np.abs(p.coefficients[1:]))) ** (1.0 / p.degree))
    out = np.zeros_like(az)
    for k, c in enumerate(p.coefficients):
        out = out * az + abs(c) + (s**k if k and coefficients else 0.0)
    return 4 * p.degree * EPS * out


def poly_roots(p: PolyCoeffs, tol: float = DEFAULT_TOL, max_iter: int = 10000) -> np.ndarray:
    """All complex roots with multiplicity (Durand–Kerner).

    Iterates simultaneously from ``R (0.4+0.9i)^k``, ``R`` a root bound, until every correction is at
    rounding level or every residual is below the Horner rounding error.
    """
    d = p.degree
    if d < 1:
        raise InputError("polynomial of degree zero has no roots")
    c = p.coefficients
    if d == 1:
        return np.array([-c[1]])
    k = np.arange(1, d + 1)
    R = 2 * float(np.max(np.abs(c[1:]) ** (1.0 / k)))  # Fujiwara bound on |root|
    R = R if R > 0 else 1.0
    z = R * (0.4 + 0.9j) ** np.arange(d)
    offdiag = ~np.eye(d, dtype=bool)
    for _ in range(max_iter):
        diffs = z[:, None] - z[None, :]
        denom = np.prod(np.where(offdiag, diffs, 1.0), axis=1)
        denom = np.where(denom == 0, EPS, denom)
        step = p(z) / denom
        z = z - step
        small_step = np.all(np.abs(step) <= 4 * EPS * (1 + np.abs(z)))
        if small_step or np.all(np.abs(p(z)) <= _noise(p, z, coefficients=False)):
            break
    bound = tol * (1 + np.abs(z)) ** d
    if not np.all(np.abs(p(z)) <= bound):
        raise IterationError(f"Durand–Kerner did not converge in {max_iter} iterations", best=z)
    return z


def _root_clusters(p: PolyCoeffs, roots: np.ndarray) -> list:
    """Group roots that numerically belong to one multiple root.

    ``k`` roots are merged when their spread is within the radius at which a
    ``k``-fold root is resolvable: ``(noise / |prod of distances to the others|)^(1/k)``.
    """
    d = roots.size
    left = list(range(d))
    clusters = []
    while left:
        i = left[0]
        order = sorted(left, key=lambda j: abs(roots[j] - roots[i]))
        chosen = [i]
        for k in range(len(order), 1, -1):
            cand = order[:k]
            mu = roots[cand].mean()
            others = [j for j in range(d) if j not in cand]
            q = np.prod(np.abs(mu - roots[others])) if others else 1.0
            radius = 10 * (float(_noise(p, np.array([mu]))[0]) / max(q, EPS)) ** (1.0 / k)
            if max(abs(roots[j] - mu) for j in cand) <= radius:
                chosen = cand
                break
        clusters.append(chosen)
        left = [j for j in left if j not in chosen]
    return clusters


def nullspace(M, rank_tol: float = RANK_TOL, scale: float | None = None) -> np.ndarray:
    """Basis (as columns) of the null space via row reduction with partial pivoting.

    Pivots below ``rank_tol`` times ``scale`` (default: the largest entry of
    ``M``) count as zero.  Pass the norm of ``A`` as ``scale`` for ``A - mu I``.
    """
    M = np.array(M, dtype=np.complex128)
    m, n = M.shape
    scale = max(max_norm(M), scale or 0.0)
    if scale == 0:
        return np.eye(n, dtype=np.complex128)
    thresh = rank_tol * scale
    pivcols = []
    row = 0
    for col in range(n):
        if row == m:
            break
        p = row + int(np.argmax(np.abs(M[row:, col])))
        if abs(M[p, col]) <= thresh:
            continue
        M[[row, p]] = M[[p, row]]
        M[row] = M[row] / M[row, col]
        for r in range(m):
            if r != row and M[r, col] != 0:
                M[r] = M[r] - M[r, col] * M[row]
        pivcols.append(col)
        row += 1
    free = [j for j in range(n) if j not in pivcols]
    basis = np.zeros((n, len(free)), dtype=np.complex128)
    for k, f in enumerate(free):
        basis[f, k] = 1
        for i, pc in enumerate(pivcols):
            basis[pc, k] = -M[i, f]
    return basis


def _polish(A: np.ndarray, v: np.ndarray, lam, tol: float, steps: int = 4):
    """Rayleigh-quotient inverse iteration; returns the best ``(lam, v)`` seen."""
    n = A.shape[0]
    best = (eig_residual(A, v, lam, C), lam, v)
    for _ in range(steps):
        if best[0] <= tol * 1e-3:
            break
        try:
            y = np.linalg.solve(A - lam * np.eye(n), v)
        except np.linalg.LinAlgError:
            break
        if not np.all(np.isfinite(y)) or max_norm(y) == 0:
            break
        v = normalize(y)
        lam = complex(np.vdot(v, A @ v) / np.vdot(v, v))
        r = eig_residual(A, v, lam, C)
        if r < best[0]:
            best = (r, lam, v)
    return best[1], best[2]


def complex_eigenspaces(A, tol: float = DEFAULT_TOL) -> list:
    """``(lam, basis)`` for every distinct eigenvalue, ordered by decreasing modulus."""
    A = _square(A, C)
    p = char_poly(A)
    roots = poly_roots(p, tol)
    n = A.shape[0]
    scale = max_norm(A)
    out = []

    def add(mu, N):
        mu = _clean(mu)
        if any(abs(mu - m) <= RANK_TOL * max(scale, abs(mu)) for m, _ in out):
            return
        out.append((mu, N))

    def simple(mu):
        found = _inverse_vector(A, mu, tol)
        if found is not None:
            add(found[0], found[1][:, None])

    for cl in _root_clusters(p, roots):
        if len(cl) == 1:
            simple(complex(roots[cl[0]]))
            continue
        mu = _cluster_center(p, roots, cl)
        N = nullspace(A - mu * np.eye(n), scale=max(scale, abs(mu)))
        if N.shape[1]:
            add(mu, N)
        else:
            for j in cl:
                simple(complex(roots[j]))
    out.sort(key=lambda t: (-abs(t[0]), -t[0].real, -t[0].imag))
    return out


def _derivative(c: np.ndarray) -> np.ndarray:
    d = c.size - 1
    return c[:-1] * np.arange(d, 0, -1)


def _cluster_center(p: PolyCoeffs, roots: np.ndarray, cluster) -> complex:
    """Mean of the cluster, polished by Newton on the ``(k-1)``-th derivative.

    A ``k``-fold root of ``p`` is a simple root of ``p^(k-1)``.
    """
    mu = complex(roots[cluster].mean())
    if len(cluster) == 1:
        return mu
    c = p.coefficients
    for _ in range(len(cluster) - 1):
        c = _derivative(c)
    dc = _derivative(c)
    for _ in range(20):
        f = np.polyval(c, mu)
        df = np.polyval(dc, mu)
        if df == 0:
            break
        step = f / df
        mu -= step
        if abs(step) <= 4 * EPS * max(1.0, abs(mu)):
            break
    return complex(mu)


def _inverse_vector(A, mu, tol):
    """Eigenpair near the simple root ``mu`` by shifted inverse iteration, or None."""
    n = A.shape[0]
    v = np.linspace(1.0, 2.0, n) + 0.5j * np.cos(np.arange(n))
    bump = EPS * max(1.0, abs(mu))
    for _ in range(3):
        for _ in range(6):
            try:
                y = np.linalg.solve(A - (mu + bump) * np.eye(n), v)
                break
            except np.linalg.LinAlgError:
                bump *= 1e2  # the root is exact; move off it
        else:
            return None
        if not np.all(np.isfinite(y)) or max_norm(y) == 0:
            return None
        v = normalize(y)
    lam = complex(np.vdot(v, A @ v) / np.vdot(v, v))
    lam, v = _polish(A, v, lam, tol)
    if eig_residual(A, v, lam, C) > tol:
        return None
    return lam, v


def eigenpairs_complex(A, tol: float = DEFAULT_TOL) -> list[EigenPair]:
    """One verified eigenpair per basis vector of every eigenspace."""
    A = _square(A, C)
    out = []
    for mu, N in complex_eigenspaces(A, tol):
        for k in range(N.shape[1]):
            lam, v = _polish(A, normalize(N[:, k]), mu, tol)
            out.append(make_eigenpair(A, v, _clean(lam), "classical", C, tol))
    return out


def _clean(z: complex) -> complex:
    re = 0.0 if abs(z.real) <= EPS * abs(z) else z.real
    im = 0.0 if abs(z.imag) <= EPS * max(1.0, abs(z)) else z.imag
    return complex(re, im)


def perron_eigenpair(A, tol: float = DEFAULT_TOL, max_iter: int = 10000, x0=None) -> EigenPair:
    """Perron root and nonnegative eigenvector by power iteration.

    Starts from the uniform vector (or ``x0``) normalized in the 1-norm.  If
    plain iteration does not converge, successive iterates are averaged,
    i.e. the iteration is rerun on ``(I + A/ρ)/2``, which removes the
    oscillation of imprimitive matrices.
    """
    A = _square(A, NN)
    if not A.any():
        raise InputError("Perron eigenpair of the zero matrix is undefined")
    n = A.shape[0]
    x = np.ones(n) if x0 is None else np.asarray(x0, dtype=float)
    if np.any(x < 0) or x.sum() == 0:
        raise InputError("start vector must be nonnegative and nonzero")
    x = x / x.sum()
    for averaged in (False, True):
        found = _power(A, x, tol, max_iter, averaged)
        if found is not None:
            rho, v = found
            return make_eigenpair(A, v, rho, "power", NN, tol, {"averaged": averaged})
    raise IterationError(
        "power iteration did not converge, also with averaged iterates", best=x
    )


def _power(A, x, tol, max_iter, averaged, patience=100):
    best, since = np.inf, 0
    for _ in range(max_iter):
        y = A @ x
        s = y.sum()
        if s == 0:
            return 0.0, x
        r = np.abs(y - s * x).max() / (max(1.0, s) * np.abs(x).max())
        if r <= tol * 1e-2:
            return float(s), x
        if r < 0.5 * best:
            best, since = r, 0
        else:
            since += 1
            if not averaged and since > patience:
                break  # oscillating; leave it to the averaged run
        y = y / s
        x = (x + y) / 2 if averaged else y
    s = (A @ x).sum()
    if eig_residual(A, x, s, NN) <= tol:
        return float(s), x
    return None


# nonnegative eigencones -------------------------------------------------


def _block_radius(B: np.ndarray, tol: float):
    if B.shape[0] == 1:
        return float(B[0, 0]), np.ones(1)
    pair = perron_eigenpair(B, tol=min(tol, 1e-12), max_iter=100000)
    return float(pair.lam), pair.vector / pair.vector.sum()


def nonneg_spectral_decomposition(A, tol: float = DEFAULT_TOL) -> list:
    """``(lam, G)`` for every eigenvalue with a nonnegative eigenvector, descending.

    Columns of ``G`` generate the cone of nonnegative eigenvectors for ``lam``:
    one per class ``C`` with radius ``lam`` that no other class of that radius
    reaches, supported on the nodes reaching ``C``.
    """
    A = _square(A, NN)
    n = A.shape[0]
    labels = strong_components(A)
    classes = {}
    for c in np.unique(labels):
        idx = np.flatnonzero(labels == c)
        sub = A[np.ix_(idx, idx)]
        if sub.any():
            classes[int(c)] = (idx, *_block_radius(sub, tol))
    R = _reach(A)
    node_rho = np.zeros(n)
    for idx, rho, _ in classes.values():
        node_rho[idx] = rho
    out = []
    for lam in sorted({rho for _, rho, _ in classes.values() if rho > 0}, reverse=True):
        if out and abs(out[-1][0] - lam) <= tol * lam:
            continue
        same = lambda r: abs(r - lam) <= tol * max(1.0, lam)
        heavy = (node_rho > lam) & ~np.vectorize(same)(node_rho)
        allowed = ~R[heavy].any(axis=0) if heavy.any() else np.ones(n, dtype=bool)
        cols = []
        for c, (idx, rho, xc) in classes.items():
            if not same(rho) or not allowed[idx].all():
                continue
            rivals = [d for d, (jdx, r2, _) in classes.items() if d != c and same(r2) and R[np.ix_(jdx, idx)].any()]
            if rivals:
                continue
            M = np.flatnonzero(R[:, idx].any(axis=1))
            Mp = np.setdiff1d(M, idx)
            x = np.zeros(n)
            x[idx] = xc
            if Mp.size:
                rhs = A[np.ix_(Mp, idx)] @ xc
                x[Mp] = np.clip(np.linalg.solve(rho * np.eye(Mp.size) - A[np.ix_(Mp, Mp)], rhs), 0, None)
            if eig_residual(A, x, rho, NN) <= tol:
                cols.append(x / x.max())
        if cols:
            out.append((lam, np.column_stack(cols)))
    zero_cols = np.flatnonzero(~A.any(axis=0))
    if zero_cols.size:
        out.append((0.0, np.eye(n)[:, zero_cols]))
    return out


# restriction to invariant subspaces and cones ----------------------------


def restrict_complex(G, A, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Matrix ``B`` with ``G B = A G`` from the normal equations; checks invariance."""
    G, A = np.asarray(G, dtype=np.complex128), np.asarray(A, dtype=np.complex128)
    AG = A @ G
    GH = G.conj().T
    B = np.linalg.solve(GH @ G, GH @ AG)
    if max_norm(G @ B - AG) > tol * max(1.0, max_norm(AG)):
        raise NotInvariantError("subspace is not invariant under the operator")
    return B


def restrict_nonneg(G, A, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Nonnegative ``B`` with ``G B ≈ A G`` column by column (active-set NNLS)."""
    G, A = np.asarray(G, dtype=float), np.asarray(A, dtype=float)
    AG = A @ G
    m = G.shape[1]
    B = np.zeros((m, m))
    for j in range(m):
        b, _ = nnls(G, AG[:, j])
        B[:, j] = b
        if max_norm(G @ b - AG[:, j]) > tol * max(1.0, max_norm(AG[:, j])):
            raise NotInvariantError("cone is not invariant under the operator")
    B[B <= 1e-14 * max(1.0, max_norm(B))] = 0.0
    return B


def eigenvector_in_subspace(G, A, domain: Domain | str = C, tol: float = DEFAULT_TOL) -> EigenPair:
    """Eigenvector of ``A`` in the span (complex) or convex cone (nonnegative) of ``G``'s columns."""
    domain = Domain.parse(domain)
    if domain is Domain.MAX_TIMES:
        raise UnsupportedDomainError("use tropical.eigenvector_in_cone for max cones")
    A = _square(A, domain)
    G = as_matrix(G, domain)
    if G.shape[0] != A.shape[0]:
        raise DimensionError(f"generators of length {G.shape[0]} for a {A.shape} operator")
    if domain is C:
        if nullspace(G).shape[1]:
            raise InputError("basis columns are linearly dependent")
        B = restrict_complex(G, A, tol)
        for mu, N in complex_eigenspaces(B, tol):
            v = normalize(G @ N[:, 0])
            lam, v = _polish(A, v, mu, tol)
            if eig_residual(A, v, lam, C) <= tol:
                return make_eigenpair(A, v, _clean(lam), "classical", C, tol)
        raise InvariantViolationError("no eigenpair of the restriction verified against A")
    B = restrict_nonneg(G, A, tol)
    try:
        pair = perron_eigenpair(B, tol=tol * 1e-2)
        v = G @ pair.vector
        if v.any() and eig_residual(A, v, pair.lam, NN) <= tol:
            return make_eigenpair(A, v, pair.lam, "power", NN, tol)
    except (IterationError, InputError, InvariantViolationError):
        pass
    for lam, U in nonneg_spectral_decomposition(B, tol):
        for k in range(U.shape[1]):
            v = G @ U[:, k]
            if v.any() and eig_residual(A, v, lam, NN) <= tol:
                return make_eigenpair(A, v, lam, "classical", NN, tol)
    raise InvariantViolationError("no nonnegative eigenvector of the restriction verified against A")
