"""Exact checks of the transform identities on concrete instances.

Every check returns :class:`VerificationReport` objects carrying both sides
as rationals, so a failure is an exact, reproducible counterexample.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .distribution import evolve, evolve_killed, expect
from .kernel import StepKernel, is_reflection_symmetric, reflect
from .lattice import InvalidAnchor, is_member, on_boundary, support_set
from .transform import (
    LatticeFunction,
    Region,
    RegionViolation,
    coefficients_via_solve,
    transform_function,
    transform_matrix,
)
from . import instances

SUITES = ("theorem", "consistency", "uniqueness", "parity", "reflection")
DEFAULT_MAX_T = {1: 6, 2: 4, 3: 3}


class NotSymmetric(ValueError):
    pass


class UnreachablePerturbation(ValueError):
    pass


@dataclass
class VerificationReport:
    name: str
    instance: dict
    lhs: Fraction
    rhs: Fraction
    # "eq" reports pass on equality; "ne" reports (uniqueness) pass on a difference.
    relation: str = "eq"

    @property
    def passed(self) -> bool:
        same = self.lhs - self.rhs == 0
        return same if self.relation == "eq" else not same

    def to_json(self, render=str) -> dict:
        return {
            "name": self.name,
            "instance": self.instance,
            "lhs": render(self.lhs),
            "rhs": render(self.rhs),
            "relation": self.relation,
            "pass": self.passed,
        }


def _anchor(t: int, x: Sequence[int]) -> tuple[int, ...]:
    x = tuple(int(v) for v in x)
    if t < 1 or not on_boundary(x):
        raise InvalidAnchor(f"bad anchor ({t}, {x})")
    return x


def _upper(f: LatticeFunction) -> None:
    if f.region is not Region.UPPER:
        raise RegionViolation("payoff must live on the upper region")


def _lower_support(law) -> list[tuple[int, ...]]:
    return sorted(z for z in law if z[-1] < 0)


def check_theorem(kernel: StepKernel, t: int, x: Sequence[int], f: LatticeFunction) -> VerificationReport:
    """``E f(Z_t^x)`` against ``E Nf(Z_t^x)`` with ``Nf`` evaluated site by site."""
    x = _anchor(t, x)
    _upper(f)
    law = evolve(kernel, x, t)
    nf = transform_function(kernel, f, _lower_support(law))
    return VerificationReport(
        "theorem",
        {"t": t, "x": list(x), "f": f.to_json()},
        expect(law, f),
        expect(law, nf),
    )


def check_consistency(kernel: StepKernel, t: int, x: Sequence[int]) -> list[VerificationReport]:
    """Restriction of ``N_{t,x}`` to every nested ``S(t', x')`` against ``N_{t',x'}``."""
    x = _anchor(t, x)
    big = support_set(t, x)
    n_big = transform_matrix(kernel, t, x)
    reports = []
    for sub in big:
        small = support_set(sub.s, sub.y)
        n_small = transform_matrix(kernel, sub.s, sub.y)
        for j, q in enumerate(small):
            col = big.order_index(q)
            for i, p in enumerate(small):
                reports.append(
                    VerificationReport(
                        "consistency",
                        {
                            "t": t,
                            "x": list(x),
                            "sub": {"s": sub.s, "y": list(sub.y)},
                            "indicator": list(q.upper()),
                            "site": list(p.lower()),
                        },
                        n_big[big.order_index(p)][col],
                        n_small[i][j],
                    )
                )
    return reports


def check_uniqueness(
    kernel: StepKernel,
    t: int,
    x: Sequence[int],
    f: LatticeFunction,
    perturb_site: Sequence[int],
    epsilon,
) -> VerificationReport:
    """Perturb ``Nf`` at one lower site and show the identity breaks at that site's anchor."""
    x = _anchor(t, x)
    _upper(f)
    epsilon = Fraction(epsilon)
    if epsilon == 0:
        raise ValueError("epsilon must be nonzero")
    site = tuple(int(v) for v in perturb_site)
    if site[-1] >= 0:
        raise UnreachablePerturbation(f"{site} is not below the boundary")
    s, y = -site[-1], site[:-1] + (0,)
    if not is_member(t, x, s, y):
        raise UnreachablePerturbation(f"({s}, {y}) is not in S({t}, {x})")
    law = evolve(kernel, y, s)
    nf = transform_function(kernel, f, _lower_support(law))
    perturbed = nf.scaled_sum(1, LatticeFunction.indicator(site, Region.LOWER), epsilon)
    return VerificationReport(
        "uniqueness",
        {"t": t, "x": list(x), "f": f.to_json(), "site": list(site), "epsilon": str(epsilon)},
        expect(law, perturbed),
        expect(law, f),
        relation="ne",
    )


def barrier_parity(kernel: StepKernel, x0: Sequence[int], T: int, f: LatticeFunction) -> VerificationReport:
    """Down-and-out value against the static hedge ``E f(Z_T) - E Nf(Z_T)`` (zero rates)."""
    _upper(f)
    killed = evolve_killed(kernel, x0, T)
    law = evolve(kernel, x0, T)
    nf = transform_function(kernel, f, _lower_support(law))
    return VerificationReport(
        "parity",
        {"x0": list(x0), "T": T, "f": f.to_json()},
        expect(killed.surviving, f),
        expect(law, f) - expect(law, nf),
    )


def check_reflection(kernel: StepKernel, horizon: int, x: Sequence[int]) -> list[VerificationReport]:
    x = _anchor(horizon, x)
    if not is_reflection_symmetric(kernel, horizon, x):
        raise NotSymmetric(f"kernel is not reflection symmetric within {horizon} of {x}")
    reports = []
    for p in support_set(horizon, x):
        target = p.lower()
        table = coefficients_via_solve(kernel, p.s, p.y)
        for q, c in table.coeffs.items():
            f = LatticeFunction.indicator(q.upper())
            reports.append(
                VerificationReport(
                    "reflection",
                    {"horizon": horizon, "x": list(x), "target": list(target), "indicator": list(q.upper())},
                    c,
                    f[reflect(target)],
                )
            )
    return reports


@dataclass
class SuiteConfig:
    seed: int = 0
    instances: int = 10
    max_t: int | None = None
    skipped: list[str] = field(default_factory=list)


def _rng(seed: int, suite: str, i: int) -> random.Random:
    return random.Random(f"{seed}/{suite}/{i}")


def run_suite(kernel: StepKernel, suite: str, config: SuiteConfig) -> Iterator[VerificationReport]:
    """Seeded random instances of one suite (or ``"all"``) for a fixed kernel.

    In ``"all"`` mode the reflection suite is skipped, and noted in
    ``config.skipped``, when the kernel is not symmetric.
    """
    d = kernel.dimension
    max_t = config.max_t or DEFAULT_MAX_T.get(d, 2)
    names = SUITES if suite == "all" else (suite,)
    for name in names:
        if name not in SUITES:
            raise ValueError(f"unknown suite {name!r}")
        for i in range(config.instances):
            rng = _rng(config.seed, name, i)
            t = rng.randint(1, max_t)
            x = instances.random_boundary_site(rng, d)
            if name == "theorem":
                f = instances.random_upper_function(rng, instances.upper_reach(t, x))
                yield check_theorem(kernel, t, x, f)
            elif name == "consistency":
                yield from check_consistency(kernel, t, x)
            elif name == "uniqueness":
                f = instances.random_upper_function(rng, instances.upper_reach(t, x))
                p = rng.choice(support_set(t, x).points)
                eps = instances.random_rational(rng, allow_zero=False)
                yield check_uniqueness(kernel, t, x, f, p.lower(), eps)
            elif name == "parity":
                x0 = x[:-1] + (rng.randint(1, max_t),)
                law = evolve(kernel, x0, t)
                f = instances.random_upper_function(rng, sorted(z for z in law if z[-1] > 0))
                yield barrier_parity(kernel, x0, t, f)
            else:
                if not is_reflection_symmetric(kernel, t, x):
                    if suite == "all":
                        config.skipped.append(f"reflection: kernel not symmetric within {t} of {x}")
                        break
                    raise NotSymmetric(f"kernel is not reflection symmetric within {t} of {x}")
                yield from check_reflection(kernel, t, x)
