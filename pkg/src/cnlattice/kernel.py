"""Nearest-neighbour step kernels on Z^d with exact rational probabilities."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple, Sequence

from .lattice import Site, l1_ball, on_boundary

Rational = Fraction


class Direction(NamedTuple):
    axis: int  # 1-based
    sign: int  # +1 or -1

    def key(self) -> str:
        return f"{'+' if self.sign > 0 else '-'}{self.axis}"

    @classmethod
    def parse(cls, key: str) -> "Direction":
        key = key.strip()
        if len(key) < 2 or key[0] not in "+-" or not key[1:].isdigit():
            raise ValueError(f"bad direction key {key!r}; expected '+k' or '-k'")
        return cls(int(key[1:]), 1 if key[0] == "+" else -1)


def directions(d: int) -> tuple[Direction, ...]:
    return tuple(Direction(a, s) for a in range(1, d + 1) for s in (1, -1))


class KernelError(ValueError):
    pass


class MassViolation(KernelError):
    def __init__(self, site, total):
        self.site, self.total = site, total
        where = "default" if site is None else f"site {site}"
        super().__init__(f"probabilities at {where} sum to {total}, not 1")


class NondegeneracyViolation(KernelError):
    def __init__(self, site, direction):
        self.site, self.direction = site, direction
        where = "default" if site is None else f"site {site}"
        super().__init__(f"probability of {direction.key()} at {where} is not strictly positive")


class DimensionMismatch(KernelError):
    pass


def _as_probs(d: int, probs: Mapping | Sequence, where: str) -> tuple[Fraction, ...]:
    dirs = directions(d)
    if isinstance(probs, Mapping):
        keyed = {}
        for k, v in probs.items():
            k = k if isinstance(k, Direction) else Direction.parse(str(k))
            if not 1 <= k.axis <= d or k.sign not in (1, -1):
                raise DimensionMismatch(f"direction {k.key()} invalid for d={d} ({where})")
            keyed[k] = Fraction(v)
        missing = [k.key() for k in dirs if k not in keyed]
        if missing:
            raise DimensionMismatch(f"missing directions {missing} ({where})")
        return tuple(keyed[k] for k in dirs)
    vals = tuple(Fraction(v) for v in probs)
    if len(vals) != 2 * d:
        raise DimensionMismatch(f"expected {2 * d} probabilities, got {len(vals)} ({where})")
    return vals


@dataclass(frozen=True, eq=False)
class StepKernel:
    """Time-homogeneous nearest-neighbour kernel.

    ``default`` and each override hold one probability per direction in the
    order of :func:`directions` (``+e_1, -e_1, +e_2, ...``).  Construction does
    not check the probabilities; use :func:`validate_kernel`.
    """

    dimension: int
    default: tuple[Fraction, ...]
    overrides: Mapping[Site, tuple[Fraction, ...]] = field(default_factory=dict)

    @classmethod
    def build(cls, dimension: int, default, overrides: Mapping | Iterable = ()) -> "StepKernel":
        if dimension < 1:
            raise DimensionMismatch(f"dimension must be >= 1, got {dimension}")
        items = overrides.items() if isinstance(overrides, Mapping) else overrides
        table = {}
        for site, probs in items:
            site = tuple(int(v) for v in site)
            if len(site) != dimension:
                raise DimensionMismatch(f"override site {site} has wrong dimension")
            table[site] = _as_probs(dimension, probs, f"site {site}")
        return cls(dimension, _as_probs(dimension, default, "default"), table)

    @classmethod
    def uniform(cls, d: int) -> "StepKernel":
        return cls.build(d, [Fraction(1, 2 * d)] * (2 * d))

    @cached_property
    def _key(self):
        return (self.dimension, self.default, tuple(sorted(self.overrides.items())))

    def __eq__(self, other):
        if not isinstance(other, StepKernel):
            return NotImplemented
        return self is other or self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def probs_at(self, site: Site) -> tuple[Fraction, ...]:
        return self.overrides.get(site, self.default)

    def to_json(self) -> dict:
        dirs = directions(self.dimension)

        def enc(probs):
            return {k.key(): str(p) for k, p in zip(dirs, probs)}

        return {
            "dimension": self.dimension,
            "default": enc(self.default),
            "overrides": [{"site": list(s), "probs": enc(p)} for s, p in sorted(self.overrides.items())],
        }


def step_probability(kernel: StepKernel, site: Sequence[int], direction: Direction) -> Fraction:
    axis, sign = direction
    if not 1 <= axis <= kernel.dimension:
        raise DimensionMismatch(f"axis {axis} out of range for d={kernel.dimension}")
    return kernel.probs_at(tuple(site))[2 * (axis - 1) + (0 if sign > 0 else 1)]


@dataclass
class ValidationReport:
    violations: list[KernelError]

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"ok": self.ok, "violations": [str(v) for v in self.violations]}


def validate_kernel(kernel: StepKernel) -> ValidationReport:
    violations: list[KernelError] = []
    dirs = directions(kernel.dimension)
    rows = [(None, kernel.default)] + sorted(kernel.overrides.items())
    for site, probs in rows:
        if site is not None and len(site) != kernel.dimension:
            violations.append(DimensionMismatch(f"override site {site} has wrong dimension"))
            continue
        if len(probs) != len(dirs):
            violations.append(DimensionMismatch(f"{len(probs)} probabilities at {site or 'default'}"))
            continue
        for k, p in zip(dirs, probs):
            if p <= 0:
                violations.append(NondegeneracyViolation(site, k))
        total = sum(probs, Fraction(0))
        if total != 1:
            violations.append(MassViolation(site, total))
    return ValidationReport(violations)


def require_valid(kernel: StepKernel) -> StepKernel:
    report = validate_kernel(kernel)
    if not report.ok:
        raise report.violations[0]
    return kernel


def reflect(site: Sequence[int]) -> Site:
    """Mirror a site through the boundary hyperplane."""
    return tuple(site[:-1]) + (-site[-1],)


def _mirrored(probs: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
    swapped = list(probs)
    swapped[-2], swapped[-1] = swapped[-1], swapped[-2]
    return tuple(swapped)


def is_reflection_symmetric(kernel: StepKernel, horizon: int, base: Sequence[int]) -> bool:
    if not on_boundary(base):
        raise ValueError(f"base {tuple(base)} is not on the boundary")
    for z in l1_ball(tuple(base), horizon):
        if kernel.probs_at(reflect(z)) != _mirrored(kernel.probs_at(z)):
            return False
    return True
