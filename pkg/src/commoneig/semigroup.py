"""Finitely generated matrix semigroups and their common eigenvectors.

The commutative solver refines an invariant cone (or subspace) one generator
at a time, replacing it by the eigenvectors it contains for one eigenvalue.
Eigenspaces of commuting operators are invariant under each other, so every
refinement stays invariant under the remaining generators.  Quasinilpotent
semigroups are solved on the commutative layer ``S^(t)`` and the eigenvector
is then lifted through ``S^(t-1), ..., S^(1)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .classical import (
    complex_eigenspaces,
    nonneg_spectral_decomposition,
    restrict_complex,
    restrict_nonneg,
)
from .cones import MaxCone, induced_matrix, invariant_hull, is_invariant
from .dense import (
    DEFAULT_TOL,
    as_matrix,
    eig_residual,
    eigenvalue_of,
    identity,
    mat_mul,
    mat_vec,
    max_norm,
    normalize,
)
from .domains import Domain
from .errors import (
    ClassificationError,
    DimensionError,
    InputError,
    InvariantViolationError,
    NotInvariantError,
    PreconditionError,
)
from .tropical import spectral_decomposition

HULL_CAP = 24


@dataclass
class SemigroupSpec:
    domain: Domain
    generators: list
    closure_cap: int = 512
    word_cap: int = 12
    quasi_bound: int = 8
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        self.domain = Domain.parse(self.domain)
        if not self.generators:
            raise InputError("a semigroup needs at least one generator")
        gens = [as_matrix(g, self.domain) for g in self.generators]
        n = gens[0].shape[0]
        for g in gens:
            if g.shape != (n, n):
                raise DimensionError("generators must be square and of equal size")
        self.generators = gens
        if min(self.closure_cap, self.word_cap, self.quasi_bound) < 1:
            raise InputError("caps must be at least one")

    @property
    def n(self) -> int:
        return self.generators[0].shape[0]


@dataclass
class SemigroupClosure:
    elements: list
    words: list
    min_length: list
    truncated: bool
    levels: list = field(default_factory=list)  # levels[l-1]: elements with a word of length l
    period_start: int | None = None  # 1-based level from which the levels repeat

    def __len__(self):
        return len(self.elements)


class Layer(list):
    """Elements of ``S^(k)``; ``exact`` is False when the closure was truncated."""

    exact: bool = True


@dataclass(frozen=True)
class Classification:
    kind: str  # commutative | nilpotent | quasinilpotent | unknown
    k: int | None = None
    truncated: bool = False

    def __str__(self):
        return self.kind if self.k is None else f"{self.kind}({self.k})"

    @classmethod
    def parse(cls, text: str) -> "Classification":
        if "(" in text:
            kind, k = text.rstrip(")").split("(")
            return cls(kind, int(k))
        return cls(text)


@dataclass
class CommonEigenReport:
    vector: np.ndarray
    lambdas: list
    residuals: list
    classification: Classification | None = None
    pathway: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    layer_report: "CommonEigenReport | None" = None


# closure -----------------------------------------------------------------


def _mul(domain: Domain, A, B):
    return mat_mul(A, B, domain)


class _Store:
    """Matrices deduplicated within a relative max-norm tolerance."""

    def __init__(self, tol):
        self.tol = tol
        self.items = []
        self.keys = {}
        self._stack = None

    def _key(self, X):
        s = max_norm(X)
        return (np.round(X / s, 12) if s else X).tobytes(), float(f"{s:.12g}")

    def find(self, X) -> int:
        idx = self.keys.get(self._key(X))
        if idx is not None:
            return idx
        if not self.items:
            return -1
        if self._stack is None or len(self._stack) != len(self.items):
            self._stack = np.stack(self.items)
            self._norms = np.abs(self._stack).max(axis=(1, 2))
        diff = np.abs(self._stack - X[None]).max(axis=(1, 2))
        ok = diff <= self.tol * np.maximum(np.maximum(self._norms, max_norm(X)), 1.0)
        hits = np.flatnonzero(ok)
        return int(hits[0]) if hits.size else -1

    def add(self, X) -> int:
        self.items.append(X)
        self.keys[self._key(X)] = len(self.items) - 1
        return len(self.items) - 1


def closure(spec: SemigroupSpec) -> SemigroupClosure:
    """Breadth-first products of the generators, deduplicated within ``tol``.

    Besides the elements, the set of elements reachable by words of each exact
    length is tracked until it becomes periodic; ``S^(k)`` is read off from it.
    """
    d = spec.domain
    if spec.closure_cap < len(spec.generators):
        raise InputError("closure_cap is smaller than the number of generators")
    store = _Store(spec.tol)
    words, minlen = [], []
    level = set()
    for i, g in enumerate(spec.generators):
        idx = store.find(g)
        if idx < 0:
            idx = store.add(g)
            words.append((i,))
            minlen.append(1)
        level.add(idx)
    levels = [frozenset(level)]
    seen = {levels[0]: 1}
    truncated = False
    period_start = None
    max_levels = spec.word_cap + spec.closure_cap
    ell = 1
    while ell < max_levels:
        ell += 1
        nxt = set()
        for e in sorted(levels[-1]):
            for i, g in enumerate(spec.generators):
                X = _mul(d, store.items[e], g)
                idx = store.find(X)
                if idx < 0:
                    if ell > spec.word_cap or len(store.items) >= spec.closure_cap:
                        truncated = True
                        continue
                    idx = store.add(X)
                    words.append(words[e] + (i,))
                    minlen.append(ell)
                nxt.add(idx)
        if truncated:
            if nxt:
                levels.append(frozenset(nxt))
            break
        key = frozenset(nxt)
        levels.append(key)
        if key in seen:
            period_start = seen[key]
            break
        seen[key] = ell
    else:
        truncated = True
    if period_start is None:
        truncated = True
    return SemigroupClosure(
        elements=list(store.items),
        words=words,
        min_length=minlen,
        truncated=truncated,
        levels=levels,
        period_start=period_start,
    )


def _layer_indices(c: SemigroupClosure, k: int) -> set:
    T = len(c.levels)
    if c.period_start is not None:
        # levels[T-1] equals levels[period_start-1]; levels from period_start on recur
        last = T - 1
        lo = min(k, c.period_start)
        return set().union(*c.levels[lo - 1 : last])
    if k > T:
        return set()
    return set().union(*c.levels[k - 1 :])


def layer_k(c: SemigroupClosure, k: int) -> Layer:
    """Elements of ``S^(k)``: those expressible as a product of at least ``k`` generators."""
    if k < 1:
        raise InputError("layer index must be at least 1")
    idx = sorted(_layer_indices(c, k))
    out = Layer(c.elements[i] for i in idx)
    out.exact = not c.truncated
    out.indices = idx
    return out


def is_commutative(ms: Sequence, tol: float = DEFAULT_TOL, domain: Domain | str = Domain.MAX_TIMES) -> bool:
    domain = Domain.parse(domain)
    ms = [np.asarray(m) for m in ms]
    for i in range(len(ms)):
        for j in range(i + 1, len(ms)):
            AB = _mul(domain, ms[i], ms[j])
            BA = _mul(domain, ms[j], ms[i])
            if max_norm(AB - BA) > tol * max(1.0, max_norm(AB), max_norm(BA)):
                return False
    return True


def classify(spec: SemigroupSpec, c: SemigroupClosure | None = None) -> Classification:
    """Most specific of commutative, nilpotent(k), quasinilpotent(k); else unknown."""
    if is_commutative(spec.generators, spec.tol, spec.domain):
        return Classification("commutative")
    c = c or closure(spec)
    layers = [layer_k(c, k) for k in range(1, spec.quasi_bound + 1)]
    for k, L in enumerate(layers, 1):
        if L and all(not np.any(X) for X in L):
            return Classification("nilpotent", k, c.truncated)
    for k, L in enumerate(layers, 1):
        if is_commutative(L, spec.tol, spec.domain):
            return Classification("quasinilpotent", k, c.truncated)
    return Classification("unknown", None, c.truncated)


# common eigenvectors ------------------------------------------------------


def common_lambdas(mats: Sequence, v, domain: Domain | str):
    """Eigenvalue and residual of ``v`` for each matrix."""
    domain = Domain.parse(domain)
    lams, res = [], []
    for A in mats:
        if domain is Domain.COMPLEX:
            lam = complex(np.vdot(v, A @ v) / np.vdot(v, v))
        else:
            lam = eigenvalue_of(A, v, domain)
        lams.append(lam)
        res.append(eig_residual(A, v, lam, domain))
    return lams, res


class _Refiner:
    """Domain-specific pieces of the refinement: restriction, eigenspaces, images."""

    def __init__(self, domain: Domain, gens: list, tol: float):
        self.domain, self.gens, self.tol = domain, gens, tol
        # internal invariance checks run looser than the final verification
        self.inner = max(tol, 1e-8)

    def start(self, V):
        n = self.gens[0].shape[0]
        d = self.domain
        if d is Domain.MAX_TIMES:
            W = V if isinstance(V, MaxCone) else MaxCone(identity(n) if V is None else V)
            for A in self.gens:
                if not is_invariant(W, A, self.inner):
                    raise NotInvariantError("V is not invariant under every generator")
            return W
        G = identity(n, d) if V is None else as_matrix(V, d)
        if d is Domain.COMPLEX:
            G = np.linalg.qr(G)[0]
        for A in self.gens:
            self.restrict(G, A)
        return G

    def generators_of(self, W):
        return W.generators if isinstance(W, MaxCone) else W

    def restrict(self, W, A):
        if self.domain is Domain.MAX_TIMES:
            return induced_matrix(W, A, self.inner)
        if self.domain is Domain.COMPLEX:
            return restrict_complex(W, A, self.inner)
        return restrict_nonneg(W, A, self.inner)

    def eigen_blocks(self, B):
        if self.domain is Domain.MAX_TIMES:
            return [(lam, cone.generators) for lam, cone in spectral_decomposition(B, self.inner)]
        if self.domain is Domain.COMPLEX:
            return complex_eigenspaces(B, self.inner)
        return nonneg_spectral_decomposition(B, self.inner)

    def image(self, W, U, rest):
        G = self.generators_of(W)
        if self.domain is Domain.MAX_TIMES:
            H = mat_mul(G, U)
            H = H[:, H.max(axis=0) > 0]
            if H.shape[1] == 0:
                return None
            W2 = MaxCone.from_generators(H / H.max(axis=0), tol=self.inner)
            return invariant_hull(W2, rest, max_generators=HULL_CAP, tol=self.inner)
        H = G @ U
        if self.domain is Domain.COMPLEX:
            return np.linalg.qr(H)[0]
        H = H[:, H.max(axis=0) > 0]
        return H / H.max(axis=0) if H.shape[1] else None

    def uniform_eigen(self, W, A) -> bool:
        """Whether every generator of ``W`` is an eigenvector of ``A`` for one shared value."""
        G = self.generators_of(W)
        lams, res = common_lambdas([A], G[:, 0], self.domain)
        lam = lams[0]
        if res[0] > self.inner:
            return False
        full = mat_mul(A, G, self.domain)
        return max_norm(full - lam * G) <= self.inner * max(1.0, abs(lam)) * max_norm(G)


def _polish_common(gens, v, tol):
    """Inverse iteration on a fixed random combination of commuting complex generators."""
    rng = np.random.default_rng(12345)
    c = rng.uniform(0.5, 1.5, len(gens)) * np.exp(2j * np.pi * rng.random(len(gens)))
    Cm = sum(ci * A for ci, A in zip(c, gens))
    n = v.shape[0]
    for _ in range(3):
        lams, res = common_lambdas(gens, v, Domain.COMPLEX)
        if max(res) <= tol * 1e-3:
            break
        mu = sum(ci * li for ci, li in zip(c, lams))
        try:
            y = np.linalg.solve(Cm - mu * np.eye(n), v)
        except np.linalg.LinAlgError:
            break
        if not np.all(np.isfinite(y)):
            break
        y = normalize(y)
        if max(common_lambdas(gens, y, Domain.COMPLEX)[1]) >= max(res):
            break
        v = y
    return v


def _final_vector(domain, gens, v, tol):
    v = normalize(v)
    if domain is Domain.COMPLEX:
        v = _polish_common(gens, v, tol)
        floor = np.finfo(float).eps * max_norm(v)
        v = np.where(np.abs(v.real) <= floor, 0, v.real) + 1j * np.where(np.abs(v.imag) <= floor, 0, v.imag)
    return v


def common_eigenvector_commutative(
    generators: Sequence,
    V=None,
    domain: Domain | str = Domain.MAX_TIMES,
    tol: float = DEFAULT_TOL,
) -> CommonEigenReport:
    """A common eigenvector in ``V`` of pairwise commuting matrices.

    ``V`` is a max cone (or its generator matrix) for max-times, a basis of a
    subspace for the complex field, and the generators of a convex cone for
    the nonnegative reals; ``None`` means the whole space.  Eigenvalues are
    tried principal first; a branch whose refinement collapses is abandoned
    for the next eigenvalue of an earlier generator.
    """
    domain = Domain.parse(domain)
    gens = [as_matrix(g, domain) for g in generators]
    if not gens:
        raise InputError("no generators")
    if not is_commutative(gens, max(tol, 1e-8), domain):
        raise PreconditionError("generators do not commute")
    ref = _Refiner(domain, gens, tol)
    W0 = ref.start(V)
    pathway: list = []

    def solve(W, i):
        if i == len(gens):
            G = ref.generators_of(W)
            for j in range(G.shape[1]):
                v = _final_vector(domain, gens, G[:, j], tol)
                lams, res = common_lambdas(gens, v, domain)
                if max(res) <= tol:
                    return v, lams, res
            return None
        A = gens[i]
        if ref.uniform_eigen(W, A):
            pathway.append(f"generator {i}: whole current space is one eigenspace")
            found = solve(W, i + 1)
            if found is not None:
                return found
            pathway.pop()
            return None
        try:
            B = ref.restrict(W, A)
        except NotInvariantError:
            return None
        for lam, U in ref.eigen_blocks(B):
            W2 = ref.image(W, U, gens[i + 1 :])
            if W2 is None:
                continue
            pathway.append(f"generator {i}: eigenvalue {_fmt(lam)}, {ref.generators_of(W2).shape[1]} generator(s)")
            found = solve(W2, i + 1)
            if found is not None:
                return found
            pathway.pop()
            pathway.append(f"generator {i}: backtracked from eigenvalue {_fmt(lam)}")
        return None

    found = solve(W0, 0)
    if found is None:
        raise InvariantViolationError("no branch of the refinement produced a verified common eigenvector")
    v, lams, res = found
    return CommonEigenReport(v, lams, res, Classification("commutative"), pathway)


def _fmt(lam) -> str:
    if isinstance(lam, complex):
        return f"{lam.real:.6g}{lam.imag:+.6g}i"
    return f"{lam:.6g}"


def _annihilated(A, u, domain, tol) -> bool:
    return max_norm(mat_vec(A, u, domain)) <= tol * max(1.0, max_norm(A)) * max_norm(u)


def lift_eigenvector(u, layer_k: Sequence, layer_km1: Sequence, tol: float = DEFAULT_TOL, domain: Domain | str = Domain.MAX_TIMES):
    """Turn a common eigenvector of ``S^(k)`` into one of ``S^(k-1)``.

    If some element of ``S^(k)`` has a nonzero eigenvalue on ``u``, ``u`` itself
    works.  Otherwise ``S^(k)`` kills ``u``; then either ``S^(k-1)`` kills it too,
    or ``B'u`` for any ``B'`` in ``S^(k-1)`` not killing it is killed by all of
    ``S^(k-1)``.
    """
    domain = Domain.parse(domain)
    u = np.asarray(u, dtype=domain.dtype)
    lams, res = common_lambdas(layer_k, u, domain)
    if res and max(res) > tol:
        raise PreconditionError("u is not a common eigenvector of the upper layer")
    scale = lambda A: max(1.0, max_norm(A))
    if any(abs(l) > tol * scale(A) for l, A in zip(lams, layer_k)):
        out = u
    else:
        out = u
        for B in layer_km1:
            if not _annihilated(B, u, domain, tol):
                out = mat_vec(B, u, domain)
                break
    out = normalize(out)
    _, res = common_lambdas(layer_km1, out, domain)
    if res and max(res) > tol:
        raise InvariantViolationError("lifted vector failed verification against the lower layer")
    return out


def common_eigenvector(spec: SemigroupSpec, layer: int | None = None) -> CommonEigenReport:
    """Common eigenvector of a commutative, nilpotent or quasinilpotent semigroup.

    ``layer`` forces the quasinilpotent pipeline from ``S^(layer)`` regardless
    of the classification.
    """
    d, tol = spec.domain, spec.tol
    warnings: list = []
    if layer is None:
        c = None
        cls = classify(spec)
        if cls.kind == "commutative":
            return common_eigenvector_commutative(spec.generators, None, d, tol)
        if cls.kind == "unknown":
            raise ClassificationError(
                "semigroup not classified within the caps"
                + (" (closure truncated)" if cls.truncated else "")
            )
        t = cls.k
    else:
        if layer < 1:
            raise InputError("layer index must be at least 1")
        cls = Classification("quasinilpotent", layer)
        t = layer
    c = closure(spec)
    if c.truncated:
        cls = Classification(cls.kind, cls.k, True)
        warnings.append("closure truncated: layers S^(k) are lower bounds")
    layers = {k: layer_k(c, k) for k in range(1, t + 1)}
    top = layers[t]
    pathway = [f"classification {cls}", f"solve on S^({t}) with {len(top)} element(s)"]
    n = spec.n
    layer_report = None
    if cls.kind == "nilpotent" or not top:
        zero_cols = [j for j in range(n) if all(not np.any(X[:, j]) for X in top)]
        u = np.zeros(n, dtype=d.dtype)
        u[zero_cols or [0]] = 1
    else:
        layer_report = common_eigenvector_commutative(list(top), None, d, tol)
        u = layer_report.vector
    for k in range(t, 1, -1):
        u = lift_eigenvector(u, layers[k], layers[k - 1], tol, d)
        pathway.append(f"lifted S^({k}) -> S^({k - 1})")
    u = normalize(u)
    lams, res = common_lambdas(spec.generators, u, d)
    if max(res) > tol:
        raise InvariantViolationError("common eigenvector failed verification against the generators")
    return CommonEigenReport(u, lams, res, cls, pathway, warnings, layer_report)
