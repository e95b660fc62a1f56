import random
from fractions import Fraction

import pytest

from blancmange import BlancmangeSpec, make_generator
from blancmange.generator import CLASSIC


def oracle_s(vertices, t):
    """Reference generator value, written without any code from the package.

    Scans the pieces for the one containing the fractional part of ``t``.
    """
    p = len(vertices) - 1
    x = Fraction(t.numerator % t.denominator, t.denominator)
    for i in range(p):
        a, b = Fraction(i, p), Fraction(i + 1, p)
        if a <= x <= b:
            return vertices[i] + (x - a) * p * (vertices[i + 1] - vertices[i])
    raise AssertionError("unreachable")


def oracle_partial(vertices, b, n, t):
    """Brute-force ``sum_{k<n} s(b^k t) / b^k`` straight from the definition."""
    return sum((oracle_s(vertices, b**k * t) / b**k for k in range(n)), Fraction(0))


def random_generator(rng, p):
    while True:
        den = rng.randint(1, 12)
        interior = [Fraction(rng.randint(-den, den), den) for _ in range(p - 1)]
        if any(interior):
            return make_generator(p, [0, *interior, 0])


def make_corpus(seed=20261016, size=20):
    rng = random.Random(seed)
    specs = [BlancmangeSpec(CLASSIC, 1)]
    while len(specs) < size:
        p = rng.randint(2, 7)
        specs.append(BlancmangeSpec(random_generator(rng, p), rng.randint(1, 4)))
    return specs


CORPUS = make_corpus()


@pytest.fixture
def classic():
    return BlancmangeSpec(CLASSIC, 1)


@pytest.fixture
def g3():
    return make_generator(3, [0, 1, Fraction(1, 2), 0])


@pytest.fixture(scope="session")
def corpus():
    return CORPUS


@pytest.fixture
def rng():
    return random.Random(1234)
