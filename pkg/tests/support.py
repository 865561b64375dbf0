"""Shared helpers for the test suite: reproducible random data generators."""

from __future__ import annotations

import random
from fractions import Fraction

from walkerspin.poly import Poly


def random_poly(
    rng: random.Random,
    max_degree: int = 4,
    max_terms: int = 5,
    with_fractions: bool = True,
) -> Poly:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        exps = [0, 0, 0, 0]
        budget = rng.randint(0, max_degree)
        for _ in range(budget):
            exps[rng.randrange(4)] += 1
        num = rng.choice([-3, -2, -1, 1, 2, 3, 4])
        den = rng.choice([1, 1, 2, 3]) if with_fractions else 1
        terms[tuple(exps)] = terms.get(tuple(exps), Fraction(0)) + Fraction(num, den)
    return Poly(terms)


def random_metric_functions(rng: random.Random, max_degree: int = 4):
    """A triple (a, b, c) of random polynomial metric functions."""
    return (
        random_poly(rng, max_degree=max_degree),
        random_poly(rng, max_degree=max_degree),
        random_poly(rng, max_degree=max_degree),
    )


def random_point(rng: random.Random):
    return tuple(Fraction(rng.randint(-3, 3), rng.choice([1, 2])) for _ in range(4))


def _random_xy_poly(rng: random.Random, max_degree: int) -> Poly:
    terms = {}
    for _ in range(rng.randint(1, 3)):
        exps = [0, 0, 0, 0]
        for _ in range(rng.randint(0, max_degree)):
            exps[rng.choice([2, 3])] += 1
        terms[tuple(exps)] = terms.get(tuple(exps), Fraction(0)) + Fraction(
            rng.choice([-2, -1, 1, 2, 3]), rng.choice([1, 1, 2])
        )
    return Poly(terms)


def random_potential(rng: random.Random, max_degree: int = 5):
    """A random valid potential-chain tuple (theta, f, g, F, G, h).

    The chain is built upward from h so the derivative relations hold
    by construction.
    """
    from walkerspin.heavenly import HeavenlyPotential

    u = Poly.parse("u")
    v = Poly.parse("v")
    h = _random_xy_poly(rng, max_degree=max(0, max_degree - 2))
    f0 = _random_xy_poly(rng, max_degree - 1)
    g0 = _random_xy_poly(rng, max_degree - 1)
    f = u * h + f0
    g = v * h + g0
    F = Fraction(1, 2) * (u * u * h) + u * f0 + _random_xy_poly(rng, max_degree)
    G = Fraction(1, 2) * (v * v * h) + v * g0 + _random_xy_poly(rng, max_degree)
    return HeavenlyPotential(
        theta=random_poly(rng, max_degree=max_degree), f=f, g=g, F=F, G=G, h=h
    )
