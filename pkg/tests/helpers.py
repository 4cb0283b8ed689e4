import numpy as np
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

# entries 2^k make max-times products and residuals exact in binary floating point
POW2 = [0.0] + [2.0**k for k in range(-3, 4)]


def pow2_matrix(rng, n, zero_frac=0.3, lo=-3, hi=3):
    A = 2.0 ** rng.integers(lo, hi + 1, size=(n, n))
    A[rng.random((n, n)) < zero_frac] = 0.0
    return A


def pow2_vector(rng, n, zero_frac=0.0):
    v = 2.0 ** rng.integers(-3, 4, size=n)
    v[rng.random(n) < zero_frac] = 0.0
    return v


def random_cone(rng, n, m):
    G = 2.0 ** rng.integers(-3, 4, size=(n, m))
    G[rng.random((n, m)) < 0.3] = 0.0
    for j in range(m):
        if not G[:, j].any():
            G[rng.integers(n), j] = 1.0
    return G


def pow2_entries():
    return st.sampled_from(POW2)


def mt_matrices(min_n=1, max_n=5):
    return st.integers(min_n, max_n).flatmap(
        lambda n: arrays(np.float64, (n, n), elements=pow2_entries())
    )


def mt_vectors(n):
    return arrays(np.float64, (n,), elements=pow2_entries())


def positive_vectors(n, lo=1e-3, hi=1e3):
    return arrays(np.float64, (n,), elements=st.floats(lo, hi))
