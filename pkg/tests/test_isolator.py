import math
import random

import pytest
from hypothesis import assume, given, strategies as st

from sqfreeeval.amortize import sigma
from sqfreeeval.dyadic import Dyadic
from sqfreeeval.isolator import (
    DepthLimitError,
    Interval,
    _centered_exclusion_reference,
    condition_c0,
    condition_c1,
    isolate,
    isolate_benchmark,
    substitutions,
)
from sqfreeeval.oracle import complex_roots, sturm_count, sturm_isolate
from sqfreeeval.polynomial import IntPolynomial as P, evaluate, root_bound

from conftest import polynomials, random_polynomial


def I(a, b):
    return Interval(Dyadic.coerce(a), Dyadic.coerce(b))


def closed_count(g, J):
    return sturm_count(g, J) + (evaluate(g, J.lo).is_zero())


@st.composite
def intervals(draw, scale=8):
    lo = Dyadic(draw(st.integers(-(2**12), 2**12)), draw(st.integers(-12, 0)))
    w = Dyadic(draw(st.integers(1, 2**10)), draw(st.integers(-14, -2)))
    return Interval(lo * scale, lo * scale + w * scale)


class TestPredicates:
    def test_c0(self):
        assert not condition_c0(P([0, 1]), I(-1, 1))
        assert condition_c0(P([0, 1]), I(1, 2))
        assert condition_c0(P([-2, 0, 1]), I(0, 1))

    def test_c1(self):
        assert condition_c1(P([1]), I(-3, 5))
        assert not condition_c1(P([0, 1]), I(-1, 1))
        assert condition_c1(P([0, 1]), I(1, 2))

    def test_zero_polynomial_never_excludes(self):
        assert not condition_c0(P([]), I(1, 2))

    def test_tie_means_failure(self):
        # |g(m)| = 1 equals the bound 1 * (w/2) exactly
        assert not condition_c0(P([0, 1]), I(0, 2))

    def test_degenerate_interval(self):
        assert condition_c0(P([0, 1]), I(1, 1))
        assert not condition_c0(P([0, 1]), I(0, 0))


class TestIsolate:
    def test_linear(self):
        # h = 1 makes C1 hold on the whole input, so no bisection is needed
        rep = isolate(P([0, 1]), I(-2, 2))
        assert rep.isolating_intervals == (I(-2, 2),)
        assert rep.point_roots == ()
        assert rep.stats.partition_size == 1

    def test_linear_off_center(self):
        rep = isolate(P([0, 1]), I(-2, 6))
        assert rep.root_count == 1

    def test_no_real_roots(self):
        rep = isolate(P([1, 0, 1]), I(-2, 2))
        assert rep.root_count == 0

    def test_sqrt2(self):
        rep = isolate(P([-2, 0, 1]), I(-4, 4))
        assert len(rep.isolating_intervals) == 2
        neg, pos = rep.isolating_intervals
        assert neg.contains_float(-math.sqrt(2)) and pos.contains_float(math.sqrt(2))
        g = P([-2, 0, 1])
        assert sturm_count(g, neg) == 1 and sturm_count(g, pos) == 1

    def test_benchmark_examples(self):
        assert len(isolate_benchmark(P([-2, 0, 1])).isolating_intervals) == 2
        rep = isolate_benchmark(P([0, -1, 0, 1]))
        assert rep.root_count == 3
        assert set(rep.point_roots) == {Dyadic(-1), Dyadic(0), Dyadic(1)}

    def test_endpoint_roots(self):
        rep = isolate(P([-1, 0, 1]), I(-1, 1))
        assert rep.endpoint_roots == (Dyadic(-1), Dyadic(1))
        assert rep.root_count == 2

    def test_multiple_roots_reported_once(self):
        f = P.from_roots([1, 1, 1, -2, -2, 3])
        rep = isolate_benchmark(f)
        assert rep.root_count == 3

    def test_errors(self):
        with pytest.raises(ValueError):
            isolate(P([3]), I(0, 1))
        with pytest.raises(ValueError):
            isolate(P([]), I(0, 1))
        with pytest.raises(ValueError):
            isolate(P([0, 1]), I(1, 1))
        with pytest.raises(ValueError):
            isolate(P([0, 1]), I(0, 1), order="random")

    def test_depth_cap(self):
        f = P([-2, 2**17, -(2**31)] + [0] * 5 + [1])
        with pytest.raises(DepthLimitError):
            isolate_benchmark(f, max_depth=3)

    def test_report_invariants(self):
        rep = isolate_benchmark(P([-2, 8, -8, 1]))
        s = rep.stats
        assert s.partition_size == s.bisections + 1
        assert s.max_depth <= s.bisections
        d = rep.as_dict()
        assert d["stats"]["partition_size"] == s.partition_size


@given(polynomials(max_degree=8, max_bits=8), intervals())
def test_c0_c1_soundness(f, J):
    g, h = substitutions(f)
    if condition_c0(g, J):
        assert closed_count(g, J) == 0
    if condition_c1(h, J):
        assert closed_count(g, J) <= 1


@given(polynomials(max_degree=8, max_bits=8), intervals(), st.integers(0, 2**8), st.integers(0, 2**8))
def test_predicates_monotone(f, J, a, b):
    g, h = substitutions(f)
    a, b = sorted((a, b))
    # K = [lo + a w / 256, lo + b w / 256] is a dyadic subinterval of J
    step = J.width.scale2(-8)
    K = Interval(J.lo + step * a, J.lo + step * b)
    if condition_c0(g, J):
        assert condition_c0(g, K)
    if condition_c1(h, J):
        assert condition_c1(h, K)


@given(polynomials(max_degree=8, max_bits=8), intervals())
def test_integer_kernel_matches_reference(f, J):
    assert condition_c0(f, J) == _centered_exclusion_reference(f, J)


@given(polynomials(max_degree=8, max_bits=8), st.integers(-(2**10), 2**10))
def test_sufficiency(f, num):
    g, h = substitutions(f)
    m = Dyadic(num, -6)
    for p, check in ((g, condition_c0), (h, condition_c1)):
        if p.degree < 1:
            continue
        roots = complex_roots(p).roots
        try:
            s = sigma(float(m), roots)
        except ZeroDivisionError:
            continue
        assume(s > 0)
        limit = 0.99 / s
        # largest dyadic width k / 2^e below the limit with 8 significant bits
        e = 8 - math.floor(math.log2(limit))
        k = math.floor(limit * 2.0**e)
        assume(k >= 1)
        w = Dyadic(k, -e)
        half = w.half()
        assert check(p, Interval(m - half, m + half))


def test_worklist_order_does_not_matter():
    rng = random.Random(7)
    for _ in range(40):
        f = random_polynomial(rng)
        a = isolate_benchmark(f, order="depth")
        b = isolate_benchmark(f, order="breadth")
        assert a == b


def test_matches_sturm_oracle():
    rng = random.Random(99)
    for _ in range(150):
        f = random_polynomial(rng)
        g, _ = substitutions(f)
        rep = isolate_benchmark(f)
        B = root_bound(f)
        assert rep.root_count == len(sturm_isolate(g, Interval(-B, B)))
        for J in rep.isolating_intervals:
            assert sturm_count(g, J) - evaluate(g, J.hi).is_zero() == 1
            assert evaluate(g, J.lo).sign() * evaluate(g, J.hi).sign() < 0
        for r in rep.point_roots:
            assert evaluate(g, r).is_zero()
            assert not any(J.lo < r < J.hi for J in rep.isolating_intervals)
        for J, K in zip(rep.isolating_intervals, rep.isolating_intervals[1:]):
            assert J.hi <= K.lo
