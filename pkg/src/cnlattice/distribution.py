"""Exact finite-horizon laws of the chain, with and without killing at x_d = 0."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterator, Mapping, NamedTuple, Sequence

from .kernel import StepKernel, directions
from .lattice import Site


class StartOnBoundary(ValueError):
    pass


@dataclass(frozen=True)
class Measure(Mapping):
    """Finitely supported measure on Z^d; missing sites have mass zero."""

    masses: Mapping[Site, Fraction] = field(default_factory=dict)

    def __getitem__(self, site) -> Fraction:
        return self.masses.get(tuple(site), Fraction(0))

    def __iter__(self) -> Iterator[Site]:
        return iter(self.masses)

    def __len__(self) -> int:
        return len(self.masses)

    def __contains__(self, site) -> bool:
        return tuple(site) in self.masses

    def total(self) -> Fraction:
        return sum(self.masses.values(), Fraction(0))

    def to_json(self, render=str) -> list[dict]:
        return [{"site": list(z), "mass": render(m)} for z, m in sorted(self.masses.items())]


class Absorption(NamedTuple):
    time: int
    site: Site
    mass: Fraction


@dataclass(frozen=True)
class KilledEvolution:
    surviving: Measure
    absorbed: tuple[Absorption, ...]

    def absorbed_mass(self) -> Fraction:
        return sum((a.mass for a in self.absorbed), Fraction(0))

    def to_json(self, render=str) -> dict:
        return {
            "surviving": self.surviving.to_json(render),
            "absorbed": [{"time": a.time, "site": list(a.site), "mass": render(a.mass)} for a in self.absorbed],
        }


def _moves(d: int) -> list[tuple[int, int]]:
    return [(axis - 1, sign) for axis, sign in directions(d)]


def _step(kernel: StepKernel, current: Mapping[Site, Fraction]) -> dict[Site, Fraction]:
    moves = _moves(kernel.dimension)
    nxt: dict[Site, Fraction] = defaultdict(Fraction)
    for z, m in current.items():
        for (i, sgn), p in zip(moves, kernel.probs_at(z)):
            w = list(z)
            w[i] += sgn
            nxt[tuple(w)] += m * p
    return dict(nxt)


@lru_cache(maxsize=8192)
def _history(kernel: StepKernel, x0: Site, t: int) -> tuple[Measure, ...]:
    if t == 0:
        return (Measure({x0: Fraction(1)}),)
    prev = _history(kernel, x0, t - 1)
    return prev + (Measure(_step(kernel, prev[-1].masses)),)


def evolve(kernel: StepKernel, x0: Sequence[int], t: int) -> Measure:
    """Law of ``Z_t`` started at ``x0``."""
    if t < 0:
        raise ValueError("t must be >= 0")
    x0 = tuple(int(v) for v in x0)
    if len(x0) != kernel.dimension:
        raise ValueError(f"site {x0} does not match kernel dimension {kernel.dimension}")
    return _history(kernel, x0, t)[t]


def evolve_killed(kernel: StepKernel, x0: Sequence[int], t: int) -> KilledEvolution:
    """Law of ``Z_t`` on ``{tau > t}``, plus the hitting time/site split of the killed mass.

    Unit steps cannot jump over the boundary, so killing on first landing is exact.
    """
    x0 = tuple(int(v) for v in x0)
    if x0[-1] == 0:
        raise StartOnBoundary(f"start {x0} lies on the boundary")
    if x0[-1] < 0:
        raise ValueError(f"start {x0} lies below the boundary")
    alive: dict[Site, Fraction] = {x0: Fraction(1)}
    absorbed: list[Absorption] = []
    for time in range(1, t + 1):
        nxt = _step(kernel, alive)
        alive = {}
        for z in sorted(nxt):
            if z[-1] == 0:
                absorbed.append(Absorption(time, z, nxt[z]))
            else:
                alive[z] = nxt[z]
    return KilledEvolution(Measure(alive), tuple(absorbed))


def expect(m: Mapping[Site, Fraction], f: Mapping[Site, Fraction]) -> Fraction:
    """Exact ``sum_z f(z) m(z)``; both arguments are finitely supported maps."""
    small, big = (m, f) if len(m) <= len(f) else (f, m)
    total = Fraction(0)
    for z in small:
        if z in big:
            total += m[z] * f[z]
    return total


_ENUM_LIMITS = {1: 12, 2: 8, 3: 6}


def enumerate_paths(kernel: StepKernel, x0: Sequence[int], t: int, killed: bool = False) -> Measure:
    """Brute-force law over all ``(2d)^t`` paths.

    Independent of :func:`evolve`; meant as a test oracle only.  With
    ``killed=True`` paths touching the boundary at any time in ``1..t`` are dropped.
    """
    d = kernel.dimension
    if t > _ENUM_LIMITS.get(d, 4):
        raise ValueError(f"path enumeration refused for d={d}, t={t}")
    dirs = directions(d)
    out: dict[Site, Fraction] = {}
    for path in product(range(2 * d), repeat=t):
        z = list(x0)
        weight = Fraction(1)
        dead = False
        for k in path:
            axis, sign = dirs[k]
            weight *= kernel.probs_at(tuple(z))[k]
            z[axis - 1] += sign
            if killed and z[-1] == 0:
                dead = True
                break
        if not dead:
            key = tuple(z)
            out[key] = out.get(key, Fraction(0)) + weight
    return Measure(out)
