import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import ZZ
from sympy.polys.galoistools import gf_irreducible_p

from ccc_forge.field import (
    ExtField,
    ParameterError,
    Parameters,
    find_irreducible,
    format_modulus,
    format_polynomial,
    is_irreducible,
    parse_modulus,
)

SMALL = [(3, 1), (3, 2), (3, 3), (5, 2), (7, 2), (3, 4), (5, 3)]


def _sympy_irreducible(coeffs, p):
    # galoistools wants highest degree first
    return gf_irreducible_p(list(reversed(coeffs)), p, ZZ)


def _scan_first_irreducible(p, m):
    for idx in range(p**m):
        low = [(idx // p**i) % p for i in range(m)]
        if _sympy_irreducible(low + [1], p):
            return tuple(low) + (1,)


@pytest.mark.parametrize("p,m", [(3, 2), (3, 3), (3, 4), (5, 2), (5, 3), (7, 2), (7, 3), (11, 2), (3, 6)])
def test_find_irreducible_is_first_in_canonical_order(p, m):
    assert find_irreducible(p, m) == _scan_first_irreducible(p, m)


def test_known_moduli():
    assert find_irreducible(3, 2) == (1, 0, 1)
    assert find_irreducible(3, 4) == (2, 1, 0, 0, 1)
    assert find_irreducible(5, 3) == (1, 1, 0, 1)


@given(st.sampled_from([3, 5, 7]), st.integers(1, 4), st.data())
@settings(max_examples=60, deadline=None)
def test_rabin_agrees_with_sympy(p, m, data):
    low = data.draw(st.lists(st.integers(0, p - 1), min_size=m, max_size=m))
    f = low + [1]
    assert is_irreducible(f, p) == bool(_sympy_irreducible(f, p))


@pytest.mark.parametrize("p", [1, 2, 4, 9, 15, -3])
def test_bad_prime_rejected(p):
    with pytest.raises(ParameterError, match="p must be an odd prime"):
        ExtField(p, 2)


def test_bad_modulus_rejected():
    with pytest.raises(ParameterError):
        ExtField(3, 2, (2, 0, 1))  # x^2 + 2 = (x-1)(x+1)
    with pytest.raises(ParameterError):
        ExtField(3, 2, (1, 0, 2))  # not monic
    with pytest.raises(ParameterError):
        ExtField(3, 2, (1, 1))  # wrong degree


def test_cap(monkeypatch):
    monkeypatch.setenv("CCC_FORGE_MAX_Q", "100")
    with pytest.raises(ParameterError):
        ExtField(5, 3)
    ExtField(3, 4)


def test_modulus_text_roundtrip():
    assert parse_modulus("2,1,0,0,1") == (2, 1, 0, 0, 1)
    assert format_modulus((2, 1, 0, 0, 1)) == "2,1,0,0,1"
    assert format_polynomial((2, 1, 0, 0, 1)) == "x^4 + x + 2"
    with pytest.raises(ParameterError):
        parse_modulus("1,a")


@pytest.mark.parametrize("p,m,s,eps,tau", [(3, 2, 1, None, -1), (3, 3, 1, 1, None), (5, 2, 4, None, 1), (7, 3, 9, 1, None), (3, 5, 1, -1, None), (5, 3, 4, 1, None), (7, 4, 9, None, 1), (3, 4, 1, None, 1)])
def test_sign_constants(p, m, s, eps, tau):
    prm = Parameters(p, m)
    assert (prm.s, prm.epsilon, prm.tau) == (s, eps, tau)
    assert prm.minus_one_s == (-1) ** s


def test_f9_arithmetic():
    F = ExtField(3, 2)
    x = F.x
    assert x * x == F.scalar(2)
    assert x.trace() == 0
    assert (x + 1) ** 8 == F.one
    assert [e.index for e in F.enumerate_elements()] == list(range(9))


@pytest.mark.parametrize("p,m", SMALL)
def test_field_axioms(p, m):
    F = ExtField(p, m)
    els = list(F.enumerate_elements())
    rng = np.random.default_rng(p * 10 + m)
    for _ in range(60):
        a, b, c = (els[i] for i in rng.integers(0, F.q, 3))
        assert a * (b + c) == a * b + a * c
        assert (a * b) * c == a * (b * c)
        assert a * b == b * a
        if not b.is_zero():
            assert (a / b) * b == a
        assert (a + b) ** p == a**p + b**p
    with pytest.raises(ZeroDivisionError):
        F.zero.inverse()


@pytest.mark.parametrize("p,m", SMALL)
def test_bulk_tables_match_scalar(p, m):
    F = ExtField(p, m)
    els = list(F.enumerate_elements())
    scalar_tr = np.array([e.trace() for e in els])
    assert np.array_equal(F.traces(F.digits), scalar_tr)
    assert np.array_equal(F.traces_of_squares, np.array([(e * e).trace() for e in els]))
    eta = F.quadratic_character_table
    squares = {(e * e).index for e in els}
    assert [int(eta[i]) for i in range(F.q)] == [0 if i == 0 else (1 if i in squares else -1) for i in range(F.q)]
    inv = F.inverse_indices
    for e in els[1:]:
        assert (e * F.from_index(int(inv[e.index]))) == F.one


@pytest.mark.parametrize("p,m", SMALL)
def test_trace_is_linear_and_onto(p, m):
    F = ExtField(p, m)
    tr = F.traces(F.digits)
    assert np.bincount(tr, minlength=p).tolist() == [p ** (m - 1)] * p
    a, b = F.from_index(F.q - 1), F.x
    assert F.trace_pairing(np.array(a.coeffs), np.array(b.coeffs)) == (a * b).trace()


def test_generator_has_full_order():
    for p, m in SMALL:
        F = ExtField(p, m)
        g = F.generator
        powers = {(g**k).index for k in range(F.q - 1)}
        assert len(powers) == F.q - 1
