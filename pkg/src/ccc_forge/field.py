"""Arithmetic in F_p and F_{p^m}.

Elements of F_{p^m} are coefficient vectors over F_p, lowest degree first,
reduced modulo a monic irreducible polynomial.  Every element has an index
``sum(c[i] * p**i)`` which is a bijection onto ``range(p**m)``; that index
order is the canonical enumeration order used everywhere else.

Scalar operations (``FieldElement``) are plain Python and serve as the
reference path.  The ``ExtField`` bulk helpers work on numpy arrays of
coefficient vectors and exploit that the trace pairing ``Tr(x*y)`` is the
bilinear form ``x^T Q y`` with ``Q[i, j] = Tr(e_i * e_j)``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np
from sympy import factorint, isprime

DEFAULT_MAX_Q = 3**12
MAX_Q_ENV = "CCC_FORGE_MAX_Q"


class ParameterError(ValueError):
    """Invalid field or code parameters."""


def max_q() -> int:
    """Desk-scale cap on the field size, overridable through the environment."""
    raw = os.environ.get(MAX_Q_ENV)
    if raw is None:
        return DEFAULT_MAX_Q
    try:
        return int(raw)
    except ValueError:
        raise ParameterError(f"{MAX_Q_ENV} must be an integer, got {raw!r}") from None


def check_prime(p: int) -> None:
    if not isinstance(p, int) or p < 3 or not isprime(p):
        raise ParameterError("p must be an odd prime")


@dataclass(frozen=True)
class Parameters:
    """The numbers ``p``, ``m`` and the sign constants derived from them."""

    p: int
    m: int

    def __post_init__(self):
        check_prime(self.p)
        if not isinstance(self.m, int) or self.m < 1:
            raise ParameterError("m must be a positive integer")

    @property
    def q(self) -> int:
        return self.p**self.m

    @property
    def s(self) -> int:
        return ((self.p - 1) // 2) ** 2

    @property
    def epsilon(self) -> int | None:
        """(-1)^(s(m+1)/2) for odd m, else None."""
        if self.m % 2 == 0:
            return None
        return (-1) ** (self.s * (self.m + 1) // 2 % 2)

    @property
    def tau(self) -> int | None:
        """(-1)^(sm/2) for even m, else None."""
        if self.m % 2 == 1:
            return None
        return (-1) ** (self.s * self.m // 2 % 2)

    @property
    def minus_one_s(self) -> int:
        """(-1)^s, which equals eta_p(-1)."""
        return -1 if self.s % 2 else 1


# -- polynomials over F_p: lists of residues, lowest degree first -----------


def _strip(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _strip(out)


def poly_rem(a: Sequence[int], f: Sequence[int], p: int) -> list[int]:
    a = _strip([c % p for c in a])
    f = _strip(list(f))
    if not f:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = pow(f[-1], -1, p)
    df = len(f) - 1
    while len(a) - 1 >= df:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - df
        for i, fi in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fi) % p
        _strip(a)
    return a


def poly_sub(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _strip([(x - y) % p for x, y in zip(a, b)])


def poly_gcd(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a, b = _strip(list(a)), _strip(list(b))
    while b:
        a, b = b, poly_rem(a, b, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a


def poly_powmod(base: Sequence[int], e: int, f: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = poly_rem(base, f, p)
    while e:
        if e & 1:
            result = poly_rem(poly_mul(result, base, p), f, p)
        base = poly_rem(poly_mul(base, base, p), f, p)
        e >>= 1
    return result


def is_irreducible(f: Sequence[int], p: int) -> bool:
    """Rabin's test for a monic polynomial of degree >= 1."""
    f = _strip([c % p for c in f])
    m = len(f) - 1
    if m < 1 or f[-1] != 1:
        return False
    if m == 1:
        return True
    x = [0, 1]
    if poly_sub(poly_powmod(x, p**m, f, p), x, p):
        return False
    for ell in factorint(m):
        h = poly_sub(poly_powmod(x, p ** (m // ell), f, p), x, p)
        if len(poly_gcd(h, f, p)) != 1:
            return False
    return True


def find_irreducible(p: int, m: int) -> tuple[int, ...]:
    """Minimal monic irreducible polynomial of degree ``m`` over F_p.

    Candidates ``x^m + c_{m-1} x^{m-1} + ... + c_0`` are scanned in increasing
    order of ``sum(c_i * p**i)``.  Returns ``(c_0, ..., c_{m-1}, 1)``.
    """
    check_prime(p)
    if not 1 <= m <= 12:
        raise ParameterError("m must satisfy 1 <= m <= 12")
    for low in range(p**m):
        coeffs = [(low // p**i) % p for i in range(m)] + [1]
        if is_irreducible(coeffs, p):
            return tuple(coeffs)
    raise AssertionError("no irreducible polynomial found")  # unreachable


def parse_modulus(text: str) -> tuple[int, ...]:
    """Parse ``"c0,c1,...,cm"`` into a coefficient tuple."""
    try:
        return tuple(int(tok) for tok in text.split(","))
    except ValueError:
        raise ParameterError(f"bad modulus {text!r}; expected comma-separated integers") from None


def format_modulus(coeffs: Sequence[int]) -> str:
    return ",".join(str(c) for c in coeffs)


def format_polynomial(coeffs: Sequence[int]) -> str:
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c == 0:
            continue
        mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
        if not mono:
            terms.append(str(c))
        else:
            terms.append(mono if c == 1 else f"{c}*{mono}")
    return " + ".join(terms) or "0"


# -- the extension field ----------------------------------------------------


class ExtField:
    """F_{p^m} modulo a monic irreducible polynomial.

    Immutable after construction; all cached tables are derived lazily and
    never mutated afterwards.
    """

    def __init__(self, p: int, m: int, modulus: Sequence[int] | None = None):
        self.params = Parameters(p, m)
        if self.params.q > max_q():
            raise ParameterError(
                f"q = {p}^{m} = {self.params.q} exceeds the desk-scale cap {max_q()} "
                f"(set {MAX_Q_ENV} to override)"
            )
        if modulus is None:
            modulus = find_irreducible(p, m)
        modulus = tuple(int(c) for c in modulus)
        if len(modulus) != m + 1 or any(not 0 <= c < p for c in modulus):
            raise ParameterError(f"modulus must have {m + 1} coefficients in [0, {p})")
        if modulus[-1] != 1:
            raise ParameterError("modulus must be monic")
        if not is_irreducible(modulus, p):
            raise ParameterError(f"modulus {format_modulus(modulus)} is not irreducible over F_{p}")
        self.modulus = modulus
        # x^k mod f for k in [m, 2m-2], used to fold high product terms
        self._fold = [
            tuple(poly_rem([0] * k + [1], modulus, p) + [0] * m)[:m] for k in range(m, 2 * m - 1)
        ]

    @property
    def p(self) -> int:
        return self.params.p

    @property
    def m(self) -> int:
        return self.params.m

    @property
    def q(self) -> int:
        return self.params.q

    def __repr__(self):
        return f"ExtField(p={self.p}, m={self.m}, modulus={format_modulus(self.modulus)})"

    def __eq__(self, other):
        return isinstance(other, ExtField) and (self.p, self.m, self.modulus) == (
            other.p,
            other.m,
            other.modulus,
        )

    def __hash__(self):
        return hash((self.p, self.m, self.modulus))

    # construction of elements

    def element(self, coeffs: Sequence[int]) -> FieldElement:
        coeffs = tuple(int(c) % self.p for c in coeffs)
        if len(coeffs) > self.m:
            raise ParameterError("too many coefficients; reduce first")
        return FieldElement(self, coeffs + (0,) * (self.m - len(coeffs)))

    def from_index(self, index: int) -> FieldElement:
        if not 0 <= index < self.q:
            raise ParameterError(f"index {index} out of range for q = {self.q}")
        p = self.p
        return FieldElement(self, tuple((index // p**i) % p for i in range(self.m)))

    def scalar(self, c: int) -> FieldElement:
        """Embed a residue of F_p."""
        return FieldElement(self, (c % self.p,) + (0,) * (self.m - 1))

    @property
    def zero(self) -> FieldElement:
        return self.scalar(0)

    @property
    def one(self) -> FieldElement:
        return self.scalar(1)

    @property
    def x(self) -> FieldElement:
        """The class of the indeterminate."""
        if self.m == 1:
            return self.scalar(-self.modulus[0])
        return self.element([0, 1])

    def basis(self) -> list[FieldElement]:
        """Power basis 1, x, ..., x^(m-1)."""
        return [self.from_index(self.p**i) for i in range(self.m)]

    def enumerate_elements(self) -> Iterator[FieldElement]:
        """All q elements in ascending index order."""
        for i in range(self.q):
            yield self.from_index(i)

    # scalar kernels

    def _mul(self, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
        p, m = self.p, self.m
        prod = [0] * (2 * m - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        prod[i + j] += ai * bj
        out = prod[:m]
        for k in range(m, 2 * m - 1):
            c = prod[k] % p
            if c:
                fold = self._fold[k - m]
                for i in range(m):
                    out[i] += c * fold[i]
        return tuple(v % p for v in out)

    # bulk helpers (numpy)

    @cached_property
    def digits(self) -> np.ndarray:
        """``(q, m)`` array of coefficient vectors, row i is element index i."""
        idx = np.arange(self.q, dtype=np.int64)
        return np.stack([(idx // self.p**i) % self.p for i in range(self.m)], axis=1)

    @cached_property
    def _weights(self) -> np.ndarray:
        return np.array([self.p**i for i in range(self.m)], dtype=np.int64)

    def indices_of(self, coeffs: np.ndarray) -> np.ndarray:
        """Element indices of an ``(..., m)`` array of coefficient vectors."""
        return (np.asarray(coeffs, dtype=np.int64) % self.p) @ self._weights

    @cached_property
    def trace_vector(self) -> np.ndarray:
        """``Tr(e_i)`` for the power basis."""
        return np.array([b.trace() for b in self.basis()], dtype=np.int64)

    @cached_property
    def trace_form(self) -> np.ndarray:
        """Symmetric ``(m, m)`` matrix ``Q[i, j] = Tr(e_i * e_j)``."""
        basis = self.basis()
        return np.array([[(u * v).trace() for v in basis] for u in basis], dtype=np.int64)

    def traces(self, coeffs: np.ndarray) -> np.ndarray:
        return (np.asarray(coeffs, dtype=np.int64) @ self.trace_vector) % self.p

    def trace_pairing(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """``Tr(a_i * b_j)`` for coefficient arrays ``a (k, m)`` and ``b (l, m)``."""
        a = np.atleast_2d(np.asarray(a, dtype=np.int64))
        b = np.atleast_2d(np.asarray(b, dtype=np.int64))
        return (a @ self.trace_form % self.p) @ b.T % self.p

    @cached_property
    def traces_of_squares(self) -> np.ndarray:
        """``Tr(x^2)`` for every element, indexed by element index."""
        x = self.digits
        out = np.zeros(self.q, dtype=np.int64)
        qf = self.trace_form
        step = max(1, 2_000_000 // max(1, self.m))
        for lo in range(0, self.q, step):
            block = x[lo : lo + step]
            out[lo : lo + step] = ((block @ qf) * block).sum(axis=1) % self.p
        return out

    @cached_property
    def generator(self) -> FieldElement:
        """Least-index generator of the multiplicative group."""
        order = self.q - 1
        exps = [order // ell for ell in factorint(order)] if order > 1 else []
        for i in range(1, self.q):
            g = self.from_index(i)
            if all(g**e != self.one for e in exps):
                return g
        raise AssertionError("multiplicative group has no generator")  # unreachable

    @cached_property
    def discrete_walk(self) -> np.ndarray:
        """Indices of g^0, g^1, ..., g^(q-2) for the generator g."""
        g = self.generator
        out = np.empty(self.q - 1, dtype=np.int64)
        cur = self.one
        for k in range(self.q - 1):
            out[k] = cur.index
            cur = cur * g
        return out

    @cached_property
    def quadratic_character_table(self) -> np.ndarray:
        """eta(x) for every element index, from the parity of discrete logs."""
        table = np.zeros(self.q, dtype=np.int64)
        walk = self.discrete_walk
        table[walk[0::2]] = 1
        table[walk[1::2]] = -1
        return table

    @cached_property
    def square_indices(self) -> np.ndarray:
        """Index of x^2 for every element index."""
        walk = self.discrete_walk
        out = np.zeros(self.q, dtype=np.int64)
        out[walk] = walk[(2 * np.arange(self.q - 1)) % (self.q - 1)]
        return out

    @cached_property
    def inverse_indices(self) -> np.ndarray:
        """Index of 1/x for every nonzero element index; entry 0 is -1."""
        walk = self.discrete_walk
        out = np.full(self.q, -1, dtype=np.int64)
        out[walk] = walk[(-np.arange(self.q - 1)) % (self.q - 1)]
        return out


class FieldElement:
    """An element of an ``ExtField``; immutable and hashable."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: ExtField, coeffs: tuple[int, ...]):
        self.field = field
        self.coeffs = coeffs

    @property
    def index(self) -> int:
        p = self.field.p
        return sum(c * p**i for i, c in enumerate(self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def _coerce(self, other) -> FieldElement:
        if isinstance(other, FieldElement):
            if other.field is not self.field and other.field != self.field:
                raise ParameterError("elements belong to different fields")
            return other
        if isinstance(other, (int, np.integer)):
            return self.field.scalar(int(other))
        return NotImplemented

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field.p, self.field.m, self.coeffs))

    def __repr__(self):
        return f"FieldElement({format_polynomial(self.coeffs)})"

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        p = self.field.p
        return FieldElement(self.field, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return FieldElement(self.field, tuple(-a % p for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field._mul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> FieldElement:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in F_q")
        return self ** (self.field.q - 2)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def frobenius(self) -> FieldElement:
        return self**self.field.p

    def trace(self) -> int:
        """Absolute trace x + x^p + ... + x^(p^(m-1)), as a residue mod p."""
        total = self
        y = self
        for _ in range(self.field.m - 1):
            y = y.frobenius()
            total = total + y
        if any(total.coeffs[1:]):
            raise AssertionError(f"trace of {self!r} left the prime field: {total!r}")
        return total.coeffs[0]
