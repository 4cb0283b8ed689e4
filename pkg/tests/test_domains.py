import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from commoneig.domains import Domain, scalar_add, scalar_mul, validate_scalar
from commoneig.errors import DomainError

nonneg = st.floats(0, 1e6)


def test_names_round_trip():
    assert [d.value for d in Domain] == ["complex", "nonneg", "max-times"]
    for d in Domain:
        assert Domain.parse(d.value) is d
        assert Domain.parse(d) is d


def test_unknown_name():
    with pytest.raises(DomainError):
        Domain.parse("min-plus")


def test_constants():
    assert (Domain.MAX_TIMES.zero, Domain.MAX_TIMES.one) == (0.0, 1.0)
    assert (Domain.NONNEG.zero, Domain.NONNEG.one) == (0.0, 1.0)
    assert (Domain.COMPLEX.zero, Domain.COMPLEX.one) == (0j, 1 + 0j)


def test_examples():
    assert scalar_add("max-times", 2, 3) == 3
    assert scalar_add("nonneg", 2, 3) == 5
    assert scalar_mul("max-times", 2, 0.5) == 1
    assert scalar_mul("complex", 1j, 1j) == -1
    for d in Domain:
        assert scalar_mul(d, 2.5, d.one) == 2.5


@pytest.mark.parametrize("d", ["nonneg", "max-times"])
@pytest.mark.parametrize("bad", [-1.0, math.inf, math.nan, 1j])
def test_invalid_scalars(d, bad):
    with pytest.raises(DomainError):
        validate_scalar(Domain.parse(d), bad)


def test_complex_rejects_nonfinite():
    with pytest.raises(DomainError):
        validate_scalar(Domain.COMPLEX, complex(math.inf, 0))


@given(nonneg)
def test_additive_identity(a):
    for d in Domain:
        assert scalar_add(d, a, d.zero) == a


@given(nonneg, nonneg, nonneg)
def test_max_times_semiring_laws(a, b, c):
    d = Domain.MAX_TIMES
    assert scalar_add(d, a, a) == a
    assert scalar_add(d, a, b) == scalar_add(d, b, a)
    # max(b, c) * a == max(a b, a c) exactly: multiplication by a >= 0 is monotone
    assert scalar_mul(d, a, scalar_add(d, b, c)) == scalar_add(d, scalar_mul(d, a, b), scalar_mul(d, a, c))


@given(st.integers(0, 2**20), st.integers(0, 2**20), st.integers(0, 2**10))
def test_nonneg_distributes_on_integers(a, b, c):
    d = Domain.NONNEG
    assert scalar_mul(d, c, scalar_add(d, a, b)) == scalar_add(d, scalar_mul(d, c, a), scalar_mul(d, c, b))


@given(nonneg, nonneg)
def test_ordered_domains_closed(a, b):
    for d in (Domain.NONNEG, Domain.MAX_TIMES):
        assert scalar_add(d, a, b) >= 0
        assert scalar_mul(d, a, b) >= 0
