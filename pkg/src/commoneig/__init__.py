"""Eigenvectors and common eigenvectors of matrix semigroups.

Three scalar domains are supported: the complex field, the nonnegative reals
and the max-times semifield.
"""

from ._backend import BACKEND
from .domains import Domain

__all__ = ["BACKEND", "Domain"]
__version__ = "0.1.0"
