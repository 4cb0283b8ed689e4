"""Brute-force reference computations for the test-suite.

Written deliberately naively and without calls into the production solvers,
so that agreement between the two is evidence rather than tautology.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .domains import Domain
from .errors import InputError

MAX_CYCLE_N = 8
MAX_SATURATION_N = 4


@dataclass
class CycleList:
    cycles: list = field(default_factory=list)  # (node tuple, geometric mean)

    def max_mean(self) -> float:
        return max((m for _, m in self.cycles), default=0.0)

    def __len__(self):
        return len(self.cycles)


def _exact_log2(x: float):
    m, e = math.frexp(x)
    return e - 1 if m == 0.5 else None


def _geometric_mean(weights) -> float:
    exps = [_exact_log2(w) for w in weights]
    if all(e is not None for e in exps):
        return float(2.0 ** float(Fraction(sum(exps), len(exps))))
    return float(math.prod(weights) ** (1.0 / len(weights)))


def enumerate_cycles(A) -> CycleList:
    """Every simple cycle of the digraph with an arc ``i -> j`` when ``a_ij > 0``.

    Each cycle is listed once, rotated to start at its smallest node.
    """
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    if n > MAX_CYCLE_N:
        raise InputError(f"cycle enumeration refused for n = {n} > {MAX_CYCLE_N}")
    out = CycleList()

    def dfs(start, node, path, visited):
        for nxt in range(start, n):
            if A[node, nxt] <= 0:
                continue
            if nxt == start:
                cyc = tuple(path)
                ws = [A[cyc[i], cyc[(i + 1) % len(cyc)]] for i in range(len(cyc))]
                out.cycles.append((cyc, _geometric_mean(ws)))
            elif nxt not in visited:
                visited.add(nxt)
                path.append(nxt)
                dfs(start, nxt, path, visited)
                path.pop()
                visited.discard(nxt)

    for s in range(n):
        dfs(s, s, [s], {s})
    return out


def _mt_apply(A, x):
    n = len(x)
    return [max(A[i][j] * x[j] for j in range(n)) for i in range(n)]


def saturation_eigensolve(A, lam: float, tol: float = 1e-9) -> list:
    """All max-times eigenvectors for ``lam`` found by guessing where row maxima are attained.

    For every support set ``S`` and every map ``σ: S -> S`` picking the
    maximizing column of each row, the equalities ``a_{iσ(i)} x_{σ(i)} = lam x_i``
    are solved in logarithms (one free constant per component of ``σ``, set
    to zero) and the candidate is kept if it satisfies the full system.
    Solutions are returned normalized to maximum one, without duplicates.
    """
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    if n > MAX_SATURATION_N:
        raise InputError(f"saturation solve refused for n = {n} > {MAX_SATURATION_N}")
    if lam <= 0:
        raise InputError("saturation solve needs a positive eigenvalue")
    loglam = math.log(lam)
    found = []
    for size in range(1, n + 1):
        for S in itertools.combinations(range(n), size):
            outside = [i for i in range(n) if i not in S]
            if any(A[i, j] > 0 for i in outside for j in S):
                continue
            choices = [[j for j in S if A[i, j] > 0] for i in S]
            if any(not c for c in choices):
                continue
            for pick in itertools.product(*choices):
                sigma = dict(zip(S, pick))
                y = _solve_functional_graph(A, sigma, loglam, tol)
                if y is None:
                    continue
                x = [0.0] * n
                for i in S:
                    x[i] = math.exp(y[i])
                top = max(x)
                x = [xi / top for xi in x]
                Ax = _mt_apply(A, x)
                if all(abs(Ax[i] - lam * x[i]) <= tol * max(1.0, lam) for i in range(n)):
                    if not any(all(abs(a - b) <= 1e-7 for a, b in zip(x, f)) for f in found):
                        found.append(x)
    return [np.array(x) for x in found]


def _solve_functional_graph(A, sigma, loglam, tol):
    """Log-coordinates with ``y_σ(i) - y_i = log lam - log a_iσ(i)``, or None if inconsistent."""
    c = {i: loglam - math.log(A[i, j]) for i, j in sigma.items()}
    y = {}
    for root in sigma:
        if root in y:
            continue
        # walk until we revisit a node: that closes this component's cycle
        path, seen = [], {}
        node = root
        while node not in seen and node not in y:
            seen[node] = len(path)
            path.append(node)
            node = sigma[node]
        if node in y:
            anchor_tail = path
        else:
            cyc = path[seen[node]:]
            if abs(sum(c[i] for i in cyc)) > tol * max(1.0, len(cyc)):
                return None
            y[node] = 0.0
            # going backwards around the cycle: y_i = y_σ(i) - c_i
            for i in reversed(cyc[1:]):
                y[i] = y[sigma[i]] - c[i]
            anchor_tail = path[: seen[node]]
        for i in reversed(anchor_tail):
            y[i] = y[sigma[i]] - c[i]
    return y


# fixture generation -------------------------------------------------------

POW2_GRID = [0.25, 0.5, 1.0, 2.0, 4.0]
DYADIC_GRID = [0.25, 0.5, 1.0, 1.5, 2.0]


def _eval_poly(domain: Domain, coeffs, A):
    n = A.shape[0]
    if domain is Domain.MAX_TIMES:
        out = np.zeros((n, n))
        P = np.eye(n)
        for k, c in enumerate(coeffs):
            if k:
                P = np.array([[max(P[i, l] * A[l, j] for l in range(n)) for j in range(n)] for i in range(n)])
            if c:
                out = np.maximum(out, c * P)
        return out
    out = np.zeros((n, n), dtype=A.dtype)
    P = np.eye(n, dtype=A.dtype)
    for k, c in enumerate(coeffs):
        if k:
            P = P @ A
        if c:
            out = out + c * P
    return out


def _random_poly(rng, grid):
    while True:
        coeffs = [grid[rng.integers(len(grid))] if rng.random() < 0.5 else 0.0 for _ in range(4)]
        if any(coeffs[1:]):
            return coeffs


def random_commuting_family(seed: int, n: int, m: int, domain: Domain | str) -> list:
    """``m`` polynomials in one random base matrix; they commute by construction.

    Ordered domains draw entries from a dyadic grid (with zeros), so every
    product and sum is exact in binary floating point.  The complex case uses
    ``P D P^{-1}`` with a well-conditioned ``P``.
    """
    domain = Domain.parse(domain)
    if n > 8 or m > 5 or n < 1 or m < 1:
        raise InputError("random_commuting_family supports 1 <= n <= 8, 1 <= m <= 5")
    rng = np.random.default_rng(seed)
    if domain is Domain.COMPLEX:
        while True:
            P = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
            if np.linalg.cond(P) < 50:
                break
        d = rng.uniform(0.2, 1.0, n) * np.exp(2j * np.pi * rng.random(n))
        A = P @ np.diag(d) @ np.linalg.inv(P)
        polys = [[float(rng.uniform(0, 1)) if rng.random() < 0.6 else 0.0 for _ in range(4)] for _ in range(m)]
        for p in polys:
            if not any(p[1:]):
                p[1 + rng.integers(3)] = float(rng.uniform(0.1, 1))
        return [_eval_poly(domain, p, A) for p in polys]
    grid = POW2_GRID if domain is Domain.MAX_TIMES else DYADIC_GRID
    A = np.array([[0.0 if rng.random() < 0.35 else grid[rng.integers(len(grid))] for _ in range(n)] for _ in range(n)])
    if domain is Domain.NONNEG:
        A = A / 2
    coeff_grid = [0.5, 1.0, 2.0] if domain is Domain.MAX_TIMES else [0.25, 0.5, 1.0]
    return [_eval_poly(domain, _random_poly(rng, coeff_grid), A) for _ in range(m)]
