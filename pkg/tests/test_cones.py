import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from commoneig.cones import (
    MaxCone,
    convex_sample,
    gamma_pi_step,
    greatest_slice_point,
    induced_matrix,
    invariant_hull,
    is_invariant,
    member,
    project,
)
from commoneig.dense import mat_mul, mat_vec
from commoneig.errors import DimensionError, InputError, NotInvariantError
from commoneig.tropical import principal_eigencone
from helpers import pow2_matrix, random_cone

A = np.array([[2.0, 1.0], [1.0, 0.5]])
W2 = MaxCone(np.array([[1.0, 1.0], [0.0, 1.0]]))

seeds = st.integers(0, 2**32 - 1)


def cone_and_vector(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 7))
    G = random_cone(rng, n, int(rng.integers(1, 6)))
    y = 2.0 ** rng.integers(-3, 4, n)
    y[rng.random(n) < 0.2] = 0
    return rng, MaxCone(G), y


def test_project_examples():
    assert project(W2, [0.5, 2]).tolist() == [0.5, 0.5]
    assert project(W2, [3, 1]).tolist() == [3, 1]
    assert project(W2, [0, 0]).tolist() == [0, 0]


def test_member_examples():
    assert member(W2, [1, 0])
    assert not member(W2, [0, 1])
    assert member(W2, [0, 0])


def test_is_invariant_examples():
    assert is_invariant(MaxCone.orthant(2), A)
    assert is_invariant(MaxCone.ray([1, 0.5]), A)
    assert not is_invariant(MaxCone.ray([1, 0]), np.array([[0.0, 0.0], [1.0, 0.0]]))


def test_induced_matrix_examples():
    assert np.array_equal(induced_matrix(MaxCone.orthant(2), A), A)
    assert induced_matrix(MaxCone.ray([1, 0.5]), A).tolist() == [[2]]
    with pytest.raises(NotInvariantError):
        induced_matrix(MaxCone.ray([1, 0]), np.array([[0.0, 0.0], [1.0, 0.0]]))


def test_induced_matrix_on_eigencone():
    B = np.array([[1.0, 4.0, 0.0], [0.25, 1.0, 0.0], [0.0, 0.0, 1.0]])
    W = principal_eigencone(B)
    M = induced_matrix(W, B)
    assert np.array_equal(mat_mul(W.generators, M), mat_mul(B, W.generators))


def test_greatest_slice_point_examples():
    assert greatest_slice_point(MaxCone.orthant(3)).tolist() == [1, 1, 1]
    assert greatest_slice_point(MaxCone(np.array([[2.0, 1.0], [0.0, 1.0]]))).tolist() == [1, 1]
    assert greatest_slice_point(MaxCone.ray([4, 2])).tolist() == [1, 0.5]


def test_convex_sample_examples():
    s = convex_sample(MaxCone.ray([3, 1]), [1.0], [0])
    assert s.point.tolist() == [0.75, 0.25]
    s = convex_sample(MaxCone.orthant(2), [0.5, 0.5], [0, 1])
    assert s.point.tolist() == [0.5, 0.5]
    with pytest.raises(InputError):
        convex_sample(MaxCone.orthant(2), [0.7, 0.7], [0, 1])


def test_gamma_pi_examples():
    assert np.allclose(gamma_pi_step(MaxCone.orthant(2), A, [0.5, 0.5]), [2 / 3, 1 / 3], rtol=0, atol=1e-15)
    x = np.array([2 / 3, 1 / 3])
    y = gamma_pi_step(MaxCone.orthant(2), A, x)
    assert np.allclose(y, x, rtol=0, atol=1e-15)
    lam = mat_vec(A, y).sum()
    assert np.allclose(mat_vec(A, y), lam * y, rtol=0, atol=1e-14)


def test_cone_validation():
    with pytest.raises(InputError):
        MaxCone(np.array([[1.0, 0.0], [0.0, 0.0]]))
    with pytest.raises(DimensionError):
        is_invariant(MaxCone.orthant(2), np.eye(3))
    W = MaxCone.from_generators(np.array([[1.0, 2.0, 1.0], [0.0, 0.0, 1.0]]))
    assert W.size == 2


def test_invariant_hull_closes():
    B = np.array([[0.0, 1.0], [1.0, 0.0]])
    H = invariant_hull(MaxCone.ray([1, 0]), [B])
    assert H.size == 2 and is_invariant(H, B)
    C = np.array([[1.0, 0.0], [1.0, 1.0]])
    assert invariant_hull(MaxCone.ray([1, 0]), [C], max_generators=1) is None


@given(seeds, st.sampled_from([0.125, 0.5, 2.0, 16.0]))
def test_projector_laws_exact(seed, r):
    rng, W, y = cone_and_vector(seed)
    z = np.maximum(y, 2.0 ** rng.integers(-3, 4, W.dim) * (rng.random(W.dim) < 0.5))
    p = project(W, y)
    assert np.array_equal(project(W, p), p)
    assert np.all(p <= y)
    assert np.all(p <= project(W, z))
    assert np.array_equal(project(W, r * y), r * p)
    x = mat_vec(W.generators, 2.0 ** rng.integers(-2, 3, W.size))
    assert np.array_equal(project(W, x), x)


@given(seeds)
def test_lemma4_slice_samples(seed):
    rng, W, _ = cone_and_vector(seed)
    k = int(rng.integers(1, W.size + 1))
    idx = rng.choice(W.size, size=k, replace=False)
    w = rng.dirichlet(np.ones(k))
    s = convex_sample(W, w / w.sum(), idx)
    assert np.any(project(W, s.point) > 0)


@given(seeds)
def test_slice_point_dominates(seed):
    rng, W, _ = cone_and_vector(seed)
    x = mat_vec(W.generators, rng.random(W.size))
    if x.max() > 0:
        assert np.all(x / x.max() <= greatest_slice_point(W) * (1 + 1e-15))


@given(seeds)
def test_induced_matrix_soundness(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 6))
    M = pow2_matrix(rng, n)
    W = invariant_hull(MaxCone.from_generators(random_cone(rng, n, 2)), [M])
    if W is None:
        return
    B = induced_matrix(W, M)
    G = W.generators
    GB, AG = mat_mul(G, B), mat_mul(M, G)
    assert np.all(np.abs(GB - AG) <= 1e-9 * np.maximum(1, np.abs(AG)))
