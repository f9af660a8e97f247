"""Shared generators and curated measures for the test suite."""

from __future__ import annotations

import random

import pytest

from walkorder import Cone, Measure
from walkorder.rational import rat


def random_measure_1d(
    rng: random.Random,
    max_atoms: int = 6,
    max_den: int = 16,
    span: int = 24,
) -> Measure:
    """Random 1-D probability measure with small denominators.

    Weights are a composition of a denominator D <= max_den, so the total
    mass is exactly 1 and every weight has denominator at most max_den.
    """
    k = rng.randint(1, max_atoms)
    den_w = rng.randint(max(2, k), max_den)
    cuts = sorted(rng.randint(0, den_w) for _ in range(k - 1))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [den_w])]
    atoms = []
    for part in parts:
        if part == 0:
            continue
        point = (rat(rng.randint(-span, span), rng.randint(1, max_den)),)
        atoms.append((point, rat(part, den_w)))
    if not atoms:
        atoms = [((rat(0),), rat(1))]
    return Measure(1, atoms)


def random_measure_2d(rng: random.Random, max_atoms: int = 5, max_den: int = 8) -> Measure:
    k = rng.randint(1, max_atoms)
    den_w = rng.randint(max(2, k), 16)
    cuts = sorted(rng.randint(0, den_w) for _ in range(k - 1))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [den_w])]
    atoms = []
    for part in parts:
        if part == 0:
            continue
        point = (
            rat(rng.randint(-8, 8), rng.randint(1, max_den)),
            rat(rng.randint(-8, 8), rng.randint(1, max_den)),
        )
        atoms.append((point, rat(part, den_w)))
    if not atoms:
        atoms = [((rat(0), rat(0)), rat(1))]
    return Measure(2, atoms)


def bernoulli(p) -> Measure:
    """Measure with mass p at 1 and 1-p at 0."""
    p = rat(str(p)) if isinstance(p, str) else rat(p)
    return Measure(1, {(0,): 1 - p, (1,): p})


@pytest.fixture
def halfline() -> Cone:
    return Cone.halfline()


@pytest.fixture
def orthant2() -> Cone:
    return Cone.orthant(2)


@pytest.fixture
def curated_pair() -> tuple[Measure, Measure]:
    """Strictly spectrally dominant 1-D pair with a nontrivial minimal n."""
    X = Measure(1, {("2/5",): "1/10", ("3/5",): "9/10"})
    Y = Measure(1, {("1/2",): "1/2", ("4/5",): "1/2"})
    return X, Y
