"""Exact arithmetic in the cyclotomic ring Z[zeta_p].

An element is stored as ``(a_0, ..., a_{p-1})`` meaning ``sum a_j zeta^j``.
Because ``1 + zeta + ... + zeta^(p-1) = 0`` the representation is made unique
by subtracting ``a_{p-1}`` from every coefficient, so the last one is zero.
"""

from __future__ import annotations

import cmath
from typing import Iterable, Sequence

import numpy as np


def _canonical(coeffs: Sequence[int]) -> tuple[int, ...]:
    top = coeffs[-1]
    return tuple(int(c) - top for c in coeffs)


class CyclotomicInt:
    __slots__ = ("p", "coeffs")

    def __init__(self, p: int, coeffs: Iterable[int]):
        coeffs = [int(c) for c in coeffs]
        if len(coeffs) > p:
            folded = [0] * p
            for j, c in enumerate(coeffs):
                folded[j % p] += c
            coeffs = folded
        coeffs += [0] * (p - len(coeffs))
        self.p = p
        self.coeffs = _canonical(coeffs)

    @classmethod
    def integer(cls, p: int, n: int) -> CyclotomicInt:
        return cls(p, [n])

    @classmethod
    def zeta(cls, p: int, k: int = 1) -> CyclotomicInt:
        out = [0] * p
        out[k % p] = 1
        return cls(p, out)

    @classmethod
    def from_exponent_counts(cls, p: int, counts: Sequence[int]) -> CyclotomicInt:
        """``sum_j counts[j] * zeta^j``; a histogram of exponents mod p."""
        return cls(p, counts)

    def _check(self, other) -> CyclotomicInt:
        if isinstance(other, (int, np.integer)):
            return CyclotomicInt.integer(self.p, int(other))
        if not isinstance(other, CyclotomicInt):
            return NotImplemented
        if other.p != self.p:
            raise ValueError(f"cannot mix Z[zeta_{self.p}] and Z[zeta_{other.p}]")
        return other

    def __eq__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.p, self.coeffs))

    def __repr__(self):
        return f"CyclotomicInt(p={self.p}, {list(self.coeffs)})"

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return CyclotomicInt(self.p, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicInt(self.p, [-a for a in self.coeffs])

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        p = self.p
        out = [0] * p
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[(i + j) % p] += a * b
        return CyclotomicInt(p, out)

    __rmul__ = __mul__

    def shift(self, k: int) -> CyclotomicInt:
        """Multiply by zeta^k."""
        p = self.p
        out = [0] * p
        for j, a in enumerate(self.coeffs):
            out[(j + k) % p] = a
        return CyclotomicInt(p, out)

    def conjugate(self) -> CyclotomicInt:
        """Image under zeta -> zeta^(-1) (complex conjugation)."""
        p = self.p
        out = [0] * p
        for j, a in enumerate(self.coeffs):
            out[-j % p] = a
        return CyclotomicInt(p, out)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_int(self) -> int:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not a rational integer")
        return self.coeffs[0]

    def to_complex(self) -> complex:
        z = cmath.exp(2j * cmath.pi / self.p)
        return sum(a * z**j for j, a in enumerate(self.coeffs))

    def to_json(self) -> list[int]:
        return list(self.coeffs)
