"""The three scalar domains: complex field, nonnegative reals, max-times."""

from __future__ import annotations

import enum
import math
from numbers import Number

from .errors import DomainError


class Domain(str, enum.Enum):
    COMPLEX = "complex"
    NONNEG = "nonneg"
    MAX_TIMES = "max-times"

    @classmethod
    def parse(cls, name: "str | Domain") -> "Domain":
        if isinstance(name, Domain):
            return name
        try:
            return cls(name)
        except ValueError:
            raise DomainError(
                f"unknown domain {name!r}; expected one of "
                + ", ".join(d.value for d in cls)
            ) from None

    @property
    def zero(self):
        return 0j if self is Domain.COMPLEX else 0.0

    @property
    def one(self):
        return 1 + 0j if self is Domain.COMPLEX else 1.0

    @property
    def dtype(self):
        return complex if self is Domain.COMPLEX else float

    @property
    def ordered(self) -> bool:
        """True for the two domains living in the nonnegative orthant."""
        return self is not Domain.COMPLEX

    def __str__(self) -> str:
        return self.value


def validate_scalar(domain: Domain, a) -> "float | complex":
    """Return ``a`` coerced to the domain's Python type, or raise DomainError."""
    domain = Domain.parse(domain)
    if not isinstance(a, Number):
        raise DomainError(f"{a!r} is not a number")
    if domain is Domain.COMPLEX:
        z = complex(a)
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise DomainError(f"non-finite complex scalar {a!r}")
        return z
    if isinstance(a, complex):
        if a.imag != 0:
            raise DomainError(f"complex scalar {a!r} in domain {domain}")
        a = a.real
    x = float(a)
    if not math.isfinite(x) or x < 0:
        raise DomainError(f"scalar {a!r} is not a finite nonnegative real")
    return x


def scalar_add(domain: "Domain | str", a, b):
    domain = Domain.parse(domain)
    a, b = validate_scalar(domain, a), validate_scalar(domain, b)
    if domain is Domain.MAX_TIMES:
        return max(a, b)
    return a + b


def scalar_mul(domain: "Domain | str", a, b):
    domain = Domain.parse(domain)
    return validate_scalar(domain, a) * validate_scalar(domain, b)
