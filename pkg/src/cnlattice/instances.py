"""Seeded random kernels, anchors and payoffs for the verification suites."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterable, Sequence

from .kernel import StepKernel, reflect
from .lattice import Site, l1_ball, support_set
from .transform import LatticeFunction

MAX_DENOMINATOR = 12


def random_probs(rng: random.Random, d: int, max_den: int = MAX_DENOMINATOR) -> tuple[Fraction, ...]:
    """Strictly positive probabilities over ``2d`` directions with a common denominator <= ``max_den``."""
    k = 2 * d
    den = rng.randint(k, max(k, max_den))
    cuts = sorted(rng.sample(range(1, den), k - 1))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [den])]
    return tuple(Fraction(p, den) for p in parts)


def random_kernel(
    rng: random.Random,
    d: int,
    center: Sequence[int] | None = None,
    radius: int = 0,
    density: float = 0.7,
) -> StepKernel:
    """Random default plus random overrides on a share of the sites in an L1 ball."""
    center = tuple(center) if center is not None else (0,) * d
    overrides = {z: random_probs(rng, d) for z in l1_ball(center, radius) if rng.random() < density}
    return StepKernel(d, random_probs(rng, d), overrides)


def _symmetric_probs(rng: random.Random, d: int, on_boundary: bool) -> tuple[Fraction, ...]:
    probs = list(random_probs(rng, d))
    if on_boundary:
        # Boundary sites are their own mirror image: moves along e_d must balance.
        probs[-2] = probs[-1] = (probs[-2] + probs[-1]) / 2
    return tuple(probs)


def random_symmetric_kernel(rng: random.Random, d: int, center: Sequence[int] | None = None, radius: int = 0) -> StepKernel:
    """Random kernel invariant under negating the last coordinate (moves along e_d swapped)."""
    center = tuple(center) if center is not None else (0,) * d
    default = _symmetric_probs(rng, d, True)
    overrides: dict[Site, tuple[Fraction, ...]] = {}
    for z in l1_ball(center, radius):
        if z[-1] < 0 or z in overrides or rng.random() < 0.3:
            continue
        probs = _symmetric_probs(rng, d, z[-1] == 0)
        overrides[z] = probs
        if z[-1] > 0:
            mirrored = list(probs)
            mirrored[-2], mirrored[-1] = mirrored[-1], mirrored[-2]
            overrides[reflect(z)] = tuple(mirrored)
    return StepKernel(d, default, overrides)


def constant_kernel(probs: Iterable) -> StepKernel:
    probs = tuple(Fraction(p) for p in probs)
    return StepKernel(len(probs) // 2, probs, {})


def random_rational(rng: random.Random, allow_zero: bool = True) -> Fraction:
    while True:
        v = Fraction(rng.randint(-9, 9), rng.randint(1, 7))
        if v or allow_zero:
            return v


def random_boundary_site(rng: random.Random, d: int, spread: int = 2) -> Site:
    return tuple(rng.randint(-spread, spread) for _ in range(d - 1)) + (0,)


def upper_reach(t: int, x: Sequence[int]) -> list[Site]:
    """Upper sites reachable at time ``t`` from boundary site ``x``."""
    return [p.upper() for p in support_set(t, x)]


def random_upper_function(rng: random.Random, sites: Iterable[Site], zero_share: float = 0.2) -> LatticeFunction:
    return LatticeFunction({z: (0 if rng.random() < zero_share else random_rational(rng)) for z in sites})
