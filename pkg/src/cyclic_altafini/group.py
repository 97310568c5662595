"""Exact arithmetic in the cyclic group of m-th roots of unity.

An element ``exp(2*pi*j*e/m)`` is represented by its integer exponent ``e``
taken mod ``m``, so products and comparisons are exact.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass


def check_order(m: int) -> int:
    if isinstance(m, bool) or not isinstance(m, int):
        raise TypeError(f"group order must be an int, got {type(m).__name__}")
    if m < 2:
        raise ValueError(f"group order must be >= 2, got {m}")
    return m


@dataclass(frozen=True, order=True)
class GainExponent:
    """Element ``alpha_e`` of the order-``m`` cyclic group."""

    e: int
    m: int

    def __post_init__(self) -> None:
        check_order(self.m)
        if not 0 <= self.e < self.m:
            raise ValueError(f"exponent {self.e} outside [0, {self.m})")

    @classmethod
    def of(cls, e: int, m: int) -> GainExponent:
        """Build from any integer exponent, reducing it mod ``m``."""
        return cls(e % check_order(m), m)

    def __mul__(self, other: GainExponent) -> GainExponent:
        return exp_mul(self, other)

    def inverse(self) -> GainExponent:
        return exp_inv(self)

    def __complex__(self) -> complex:
        return to_complex(self)

    @property
    def is_identity(self) -> bool:
        return self.e == 0


def exp_mul(a: GainExponent, b: GainExponent) -> GainExponent:
    if a.m != b.m:
        raise ValueError(f"mismatched group orders {a.m} and {b.m}")
    return GainExponent((a.e + b.e) % a.m, a.m)


def exp_inv(a: GainExponent) -> GainExponent:
    return GainExponent((a.m - a.e) % a.m, a.m)


def root_of_unity(e: int, m: int) -> complex:
    """``exp(2*pi*j*e/m)`` with exact values on the axes."""
    e %= m
    # quarter turns are returned exactly so that m=2 and m=4 stay real/imaginary
    if (4 * e) % m == 0:
        return (1 + 0j, 1j, -1 + 0j, -1j)[(4 * e) // m]
    return cmath.exp(2j * math.pi * e / m)


def to_complex(a: GainExponent) -> complex:
    return root_of_unity(a.e, a.m)


def elements(m: int) -> list[GainExponent]:
    return [GainExponent(e, check_order(m)) for e in range(m)]
