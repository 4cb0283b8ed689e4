import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import linear_sum_assignment

from commoneig.classical import (
    PolyCoeffs,
    char_poly,
    complex_eigenspaces,
    eigenpairs_complex,
    eigenvector_in_subspace,
    nonneg_spectral_decomposition,
    nullspace,
    perron_eigenpair,
    poly_roots,
    restrict_complex,
    restrict_nonneg,
)
from commoneig.dense import eig_residual
from commoneig.errors import InputError, IterationError, NotInvariantError

S = np.array([[2.0, 1.0], [1.0, 2.0]])
seeds = st.integers(0, 2**32 - 1)


def multiset_distance(a, b):
    D = np.abs(np.asarray(a)[:, None] - np.asarray(b)[None, :])
    r, c = linear_sum_assignment(D)
    return D[r, c].max()


def parallel(u, v, tol=1e-12):
    u, v = np.asarray(u, complex), np.asarray(v, complex)
    k = np.argmax(np.abs(v))
    return np.allclose(u * v[k], v * u[k], rtol=0, atol=tol * np.abs(u).max() * np.abs(v).max())


def test_char_poly_examples():
    assert np.allclose(char_poly(S).coefficients, [1, -4, 3])
    assert np.allclose(char_poly(np.eye(4)).coefficients, np.poly(np.ones(4)))
    assert np.array_equal(char_poly(np.zeros((3, 3))).coefficients, [1, 0, 0, 0])
    assert char_poly(np.eye(5)).degree == 5


def test_poly_roots_examples():
    assert multiset_distance(poly_roots(PolyCoeffs([1, -3, 2])), [1, 2]) < 1e-12
    assert multiset_distance(poly_roots(PolyCoeffs([1, 0, 1])), [1j, -1j]) < 1e-12
    assert multiset_distance(poly_roots(PolyCoeffs([1, -4, 3])), [1, 3]) < 1e-12
    with pytest.raises(InputError):
        PolyCoeffs([2, 1])
    with pytest.raises(IterationError) as info:
        poly_roots(PolyCoeffs([1, -7, 1, 5, 1]), max_iter=1)
    assert info.value.best is not None


def test_poly_roots_residual_contract():
    p = PolyCoeffs(np.poly([0.5, 2j, -1.5, 3, 3]))
    for r in poly_roots(p, 1e-9):
        assert abs(p(r)) <= 1e-9 * (1 + abs(r)) ** p.degree


def test_eigenpairs_complex_examples():
    ps = sorted(eigenpairs_complex(np.diag([1.0, 2.0])), key=lambda p: abs(p.lam))
    assert [p.lam for p in ps] == [1, 2]
    assert parallel(ps[0].vector, [1, 0]) and parallel(ps[1].vector, [0, 1])
    ps = eigenpairs_complex(np.array([[0.0, 1.0], [0.0, 0.0]]))
    assert len(ps) == 1 and ps[0].lam == 0 and parallel(ps[0].vector, [1, 0])
    ps = eigenpairs_complex(S)
    assert ps[0].lam == pytest.approx(3) and parallel(ps[0].vector, [1, 1])
    assert ps[1].lam == pytest.approx(1) and parallel(ps[1].vector, [1, -1])


@pytest.mark.parametrize(
    "A, count",
    [
        (np.eye(6), 6),
        (np.zeros((3, 3)), 3),
        (np.diag([1.0, 1, 2, 2, 2, 3]), 6),
        (np.array([[1.0, 1.0], [0.0, 1.0]]), 1),
        (2.5 * np.eye(8), 8),
        (np.diag([1e-3, 2e-3, 5.0]), 3),
    ],
)
def test_repeated_and_defective_spectra(A, count):
    ps = eigenpairs_complex(A)
    assert len(ps) == count
    assert all(p.residual <= 1e-9 for p in ps)


def test_perron_examples():
    p = perron_eigenpair(S)
    assert p.lam == pytest.approx(3) and np.allclose(p.vector, [1, 1])
    p = perron_eigenpair(np.eye(3))
    assert p.lam == 1 and np.array_equal(p.vector, np.ones(3))
    # the uniform start is already fixed; a lopsided start needs the averaged run
    p = perron_eigenpair(np.array([[0.0, 1.0], [1.0, 0.0]]), x0=[1, 0])
    assert p.lam == pytest.approx(1) and np.allclose(p.vector, [1, 1]) and p.info["averaged"]
    with pytest.raises(InputError):
        perron_eigenpair(np.zeros((2, 2)))


def test_nullspace():
    N = nullspace(np.array([[1.0, 2.0], [2.0, 4.0]]))
    assert N.shape == (2, 1) and np.allclose(np.array([[1, 2], [2, 4]]) @ N, 0)
    assert nullspace(np.eye(3)).shape == (3, 0)
    assert nullspace(np.zeros((2, 2))).shape == (2, 2)


def test_eigenvector_in_subspace_examples():
    D = np.diag([1.0, 2.0, 3.0])
    p = eigenvector_in_subspace(np.eye(3), D, "complex")
    assert p.lam == pytest.approx(3)
    p = eigenvector_in_subspace(np.array([[0.0], [1.0], [0.0]]), D, "complex")
    assert p.lam == pytest.approx(2) and parallel(p.vector, [0, 1, 0])
    p = eigenvector_in_subspace(np.eye(3)[:, :2], D, "complex")
    assert p.lam in (pytest.approx(1), pytest.approx(2))
    p = eigenvector_in_subspace(np.eye(3)[:, :2], D, "nonneg")
    assert p.lam == pytest.approx(2) and np.allclose(p.vector, [0, 1, 0])
    with pytest.raises(NotInvariantError):
        eigenvector_in_subspace(np.array([[1.0], [1.0], [0.0]]), D, "complex")


def test_restriction_exact():
    G = np.array([[1.0, 0.0], [1.0, 1.0], [0.0, 2.0]])
    B0 = np.array([[2.0, 1.0], [0.5, 3.0]])
    pinv = np.linalg.pinv(G)
    A = G @ B0 @ pinv + (np.eye(3) - G @ pinv) * 7
    assert np.abs(G @ restrict_complex(G, A) - A @ G).max() <= 1e-10
    Bn = restrict_nonneg(G, A)
    assert np.abs(G @ Bn - A @ G).max() <= 1e-10


def test_nonneg_decomposition_reducible():
    A = np.array([[2.0, 1.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 0.0]])
    blocks = nonneg_spectral_decomposition(A)
    lams = [lam for lam, _ in blocks]
    assert lams[0] == pytest.approx(2)
    for lam, U in blocks:
        assert np.all(U >= 0)
        for u in U.T:
            assert eig_residual(A, u, lam, "nonneg") <= 1e-9


@given(seeds)
def test_diagonal_roots_recovered(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 9))
    d = rng.normal(size=n) + 1j * rng.normal(size=n)
    assert multiset_distance(poly_roots(char_poly(np.diag(d))), d) <= 1e-8


@given(seeds)
def test_perron_matches_largest_real_root(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 6))
    A = rng.uniform(0.01, 1, (n, n))
    r = poly_roots(char_poly(A))
    real = r[np.abs(r.imag) <= 1e-8 * max(1, np.abs(r).max())].real
    assert perron_eigenpair(A).lam == pytest.approx(real.max(), abs=1e-6)


@given(seeds)
def test_complex_eigenpairs_sound(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 7))
    A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    ps = eigenpairs_complex(A)
    assert len(ps) == n
    assert all(p.residual <= 1e-9 for p in ps)
    assert multiset_distance([p.lam for p in ps], np.linalg.eigvals(A)) <= 1e-8


@given(seeds)
def test_eigenspaces_sorted_by_modulus(seed):
    rng = np.random.default_rng(seed)
    A = rng.uniform(0, 1, (4, 4))
    mods = [abs(lam) for lam, _ in complex_eigenspaces(A)]
    assert mods == sorted(mods, reverse=True)
