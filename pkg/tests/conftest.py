import random
from fractions import Fraction

import pytest

from hppcheck.polynomial import Polynomial


def random_multiaffine(rng: random.Random, m: int, density: float = 0.4) -> Polynomial:
    """Random multiaffine polynomial, integer coefficients in [-9, 9]."""
    terms = {}
    for mask in range(2 ** m):
        if rng.random() < density:
            c = rng.randint(-9, 9)
            if c:
                exps = tuple((mask >> i) & 1 for i in range(m))
                terms[exps] = Fraction(c)
    return Polynomial(m, terms)


def compress_out(p: Polynomial, e: int) -> Polynomial:
    """Drop an absent variable from the ground set, shifting higher labels
    down by one (the matroid minor relabeling on the polynomial side)."""
    i = e - 1
    out = {}
    for exps, c in p.terms.items():
        assert exps[i] == 0, f"variable {e} still present"
        out[exps[:i] + exps[i + 1:]] = c
    return Polynomial(p.m - 1, out)


@pytest.fixture(scope="session")
def proposition_corpus():
    """Shared random corpus for the discriminant/quadratic-decomposition
    property suites: >= 200 multiaffine polynomials with a chosen triple."""
    rng = random.Random(20240613)
    corpus = []
    while len(corpus) < 200:
        m = rng.randint(3, 7)
        Z = random_multiaffine(rng, m, density=0.35)
        if Z.is_zero():
            continue
        e, f, g = rng.sample(range(1, m + 1), 3)
        corpus.append((Z, e, f, g))
    return corpus
