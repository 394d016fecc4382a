import random

import pytest
from hypothesis import settings, strategies as st

from sqfreeeval import Dyadic, IntPolynomial

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")

dyadics = st.builds(Dyadic, st.integers(-(2**70), 2**70), st.integers(-60, 60))


@st.composite
def polynomials(draw, max_degree=10, max_bits=8, min_degree=1):
    d = draw(st.integers(min_degree, max_degree))
    top = 2**max_bits - 1
    coeffs = draw(st.lists(st.integers(-top, top), min_size=d, max_size=d))
    lead = draw(st.integers(1, top)) * draw(st.sampled_from([1, -1]))
    return IntPolynomial(coeffs + [lead])


def random_polynomial(rng: random.Random, dmin=2, dmax=12, Lmin=2, Lmax=16) -> IntPolynomial:
    d, L = rng.randint(dmin, dmax), rng.randint(Lmin, Lmax)
    top = 2**L - 1
    coeffs = [rng.randint(-top, top) for _ in range(d)]
    lead = 0
    while lead == 0:
        lead = rng.randint(-top, top)
    return IntPolynomial(coeffs + [lead])


@pytest.fixture
def rng():
    return random.Random(1234)
