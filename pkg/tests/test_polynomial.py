import pytest
import sympy
from hypothesis import given, strategies as st

from sqfreeeval.dyadic import Dyadic
from sqfreeeval.oracle import complex_roots
from sqfreeeval.polynomial import (
    IntPolynomial as P,
    bit_length_L,
    coprime_part,
    derivative,
    divmod_exact,
    evaluate,
    gcd,
    parse_polynomial,
    pseudo_remainder,
    read_polynomial_file,
    root_bound,
    square_free_part,
    taylor_expansion,
)
from sqfreeeval.isolator import substitutions

from conftest import dyadics, polynomials

X = sympy.Symbol("X")


def to_sympy(p: P):
    return sympy.Poly(list(reversed(p.coeffs)) or [0], X)


def from_sympy(q) -> P:
    return P(int(c) for c in reversed(q.all_coeffs()))


def exact(x: Dyadic):
    return (x.mantissa, x.exponent)


class TestExamples:
    def test_evaluate(self):
        f = P([-2, 0, 1])
        assert exact(evaluate(f, Dyadic(0))) == (-1, 1)  # canonical -2
        assert exact(evaluate(f, Dyadic(3, -1))) == (1, -2)
        assert exact(evaluate(P([]), Dyadic(5, -3))) == (0, 0)

    def test_derivative(self):
        assert derivative(P([-2, 0, 1])) == P([0, 2])
        assert derivative(P([5])).is_zero()
        assert derivative(P([0, -1, 0, 1])) == P([-1, 0, 3])

    def test_taylor(self):
        assert [exact(c) for c in taylor_expansion(P([0, 0, 1]), Dyadic(1)).coeffs] == [(1, 0), (1, 1), (1, 0)]
        got = taylor_expansion(P([0, -1, 0, 1]), Dyadic(1, -1)).coeffs
        assert [exact(c) for c in got] == [(-3, -3), (-1, -2), (3, -1), (1, 0)]
        assert [exact(c) for c in taylor_expansion(P([7]), Dyadic(3, -5)).coeffs] == [(7, 0)]

    def test_gcd(self):
        assert gcd(P([0, 0, 1]), P([0, 2])) == P([0, 1])
        assert gcd(P([-1, 0, 1]), P([-1, 1])) == P([-1, 1])
        a = P.from_roots([1, 1, -2])
        b = P.from_roots([1, -3])
        assert gcd(a, b) == P([-1, 1])
        assert gcd(a, b) == from_sympy(sympy.gcd(to_sympy(a), to_sympy(b)))
        with pytest.raises(ValueError):
            gcd(P([]), P([]))

    def test_square_free_part(self):
        assert square_free_part(P([0, 0, 1])) == P([0, 1])
        assert square_free_part(P([-2, 0, 1])) == P([-2, 0, 1])
        assert square_free_part(P([2, -3, 0, 1])) == P([-2, 1, 1])
        with pytest.raises(ValueError):
            square_free_part(P([]))

    def test_coprime_part(self):
        assert coprime_part(P([0, -1, 1]), P([0, 1])) == P([-1, 1])
        assert coprime_part(P([-1, 1]), P([1, 1])) == P([-1, 1])
        f = P([-1, 0, 1])
        assert coprime_part(square_free_part(derivative(f)), f) == P([0, 1])
        with pytest.raises(ValueError):
            coprime_part(P([]), f)

    def test_root_bound(self):
        assert root_bound(P([-2, 0, 1])) == Dyadic(4)
        assert root_bound(P([0, 1])) in (Dyadic(1), Dyadic(2))
        assert root_bound(P([1, 0, 1])) >= 1
        with pytest.raises(ValueError):
            root_bound(P([3]))

    def test_bit_length(self):
        assert bit_length_L(P([-2, 0, 1])) == 2
        assert bit_length_L(P([0, 1])) == 1
        assert bit_length_L(P([1, 1000])) == 10
        with pytest.raises(ValueError):
            bit_length_L(P([]))


def test_normalisation_and_printing():
    assert P([1, 2, 0, 0]).coeffs == (1, 2)
    assert P([0, 0]).degree == -1
    assert str(P([-2, 0, 1])) == "-2,0,1"
    assert P([-2, 0, 1]).pretty() == "X^2 - 2"
    assert parse_polynomial(" -2, 0 ,1") == P([-2, 0, 1])
    with pytest.raises(ValueError):
        parse_polynomial("1,,2")


def test_polynomial_file(tmp_path):
    path = tmp_path / "polys.txt"
    path.write_text("# header\n-2,0,1\n\n1,0,1  # x^2+1\n")
    assert read_polynomial_file(path) == [P([-2, 0, 1]), P([1, 0, 1])]
    path.write_text("1,a\n")
    with pytest.raises(ValueError):
        read_polynomial_file(path)


def test_divmod_exact_rejects_remainder():
    with pytest.raises(ValueError):
        divmod_exact(P([1, 0, 1]), P([-1, 1]))


@given(polynomials(), dyadics, dyadics)
def test_taylor_reconstructs_shift(f, m, y):
    tay = taylor_expansion(f, m)
    assert len(tay.coeffs) == f.degree + 1
    total = Dyadic()
    for c in reversed(tay.coeffs):
        total = total * y + c
    assert total == evaluate(f, m + y)


@given(polynomials(), dyadics)
def test_taylor_low_coefficients(f, m):
    tay = taylor_expansion(f, m)
    assert tay.coeffs[0] == evaluate(f, m)
    assert tay.coeffs[1] == evaluate(derivative(f), m)


@given(polynomials(max_degree=8), polynomials(max_degree=6))
def test_gcd_divides_and_matches_sympy(a, b):
    common = P.from_roots([1, -2])
    a, b = a * common, b * common
    g = gcd(a, b)
    assert pseudo_remainder(a, g).is_zero()
    assert pseudo_remainder(b, g).is_zero()
    expected = from_sympy(sympy.gcd(to_sympy(a), to_sympy(b))).primitive()
    assert g == expected


@given(polynomials(max_degree=5), st.integers(1, 3))
def test_square_free_properties(f, k):
    F = f**k
    g = square_free_part(F)
    assert g.leading > 0
    assert gcd(g, derivative(g)).degree == 0
    expected = from_sympy(sympy.sqf_part(to_sympy(F))).primitive()
    assert g == expected


@given(polynomials(max_degree=6), polynomials(max_degree=4))
def test_coprime_part_is_coprime(p, q):
    p = square_free_part(p)
    c = coprime_part(p, q)
    assert gcd(c, q).degree == 0
    assert pseudo_remainder(p, c).is_zero()


@given(polynomials(max_degree=10, max_bits=10))
def test_root_bound_contains_all_roots(f):
    B = float(root_bound(f))
    assert all(abs(z) < B for z in complex_roots(f).roots)
    assert B <= 2 ** bit_length_L(f)


@given(polynomials(max_degree=9, max_bits=6))
def test_rolle_structure(f):
    g, h = substitutions(f)
    real_g = complex_roots(g).real_roots
    real_h = complex_roots(h).real_roots if h.degree > 0 else []
    for a, b in zip(real_g, real_g[1:]):
        assert any(a < r < b for r in real_h)
