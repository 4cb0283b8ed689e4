import numpy as np
import pytest

from commoneig.errors import InputError
from commoneig.oracle import enumerate_cycles, random_commuting_family, saturation_eigensolve
from commoneig.semigroup import is_commutative
from commoneig.tropical import max_cycle_mean, principal_eigencone, tropical_spectrum


def as_set(cycles):
    return {(tuple(c), m) for c, m in cycles}


def test_enumerate_cycles_examples():
    cl = enumerate_cycles(np.array([[2.0, 1.0], [1.0, 0.5]]))
    assert as_set(cl.cycles) == {((0,), 2.0), ((1,), 0.5), ((0, 1), 1.0)}
    assert enumerate_cycles(np.triu(np.ones((4, 4)), 1)).cycles == []
    assert as_set(enumerate_cycles(np.eye(3)).cycles) == {((i,), 1.0) for i in range(3)}
    with pytest.raises(InputError):
        enumerate_cycles(np.eye(9))


def scaled_set(vs):
    return {tuple(v / v.max()) for v in vs}


def reproduced(g, sols):
    return any(np.allclose(g / g.max(), s / s.max(), rtol=1e-12, atol=1e-15) for s in sols)


def test_saturation_examples():
    A = np.array([[2.0, 1.0], [1.0, 0.5]])
    assert scaled_set(saturation_eigensolve(A, 2)) == {(1, 0.5)}
    assert saturation_eigensolve(A, 1) == []
    sols = scaled_set(saturation_eigensolve(np.eye(2), 1))
    assert {(1.0, 0.0), (0.0, 1.0), (1.0, 1.0)} <= sols


def test_random_family_examples():
    for d in ("max-times", "nonneg", "complex"):
        assert len(random_commuting_family(3, 4, 1, d)) == 1
        fam = random_commuting_family(7, 5, 4, d)
        assert len(fam) == 4 and is_commutative(fam, 1e-9, d)
        assert np.array_equal(fam[0], random_commuting_family(7, 5, 4, d)[0])


def test_families_commute_for_many_seeds():
    for d in ("max-times", "nonneg", "complex"):
        for seed in range(60):
            assert is_commutative(random_commuting_family(seed, 5, 3, d), 1e-9, d)


def test_saturation_agrees_with_spectrum_small():
    rng = np.random.default_rng(5)
    for _ in range(40):
        A = 2.0 ** rng.integers(-2, 3, (3, 3))
        A[rng.random((3, 3)) < 0.4] = 0
        spec = tropical_spectrum(A)
        for lam in sorted(set(spec) | {1.0, 2.0, 0.5}):
            if lam > 0:
                assert bool(saturation_eigensolve(A, lam)) == (lam in spec)
        if max_cycle_mean(A)[0] > 0:
            sols = saturation_eigensolve(A, max_cycle_mean(A)[0])
            for g in principal_eigencone(A).generators.T:
                assert reproduced(g, sols)
