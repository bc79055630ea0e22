"""Boundary systems W+/W-, the transform N and its coefficient tables.

For an anchor ``(t, x)`` on the boundary, rows and columns of ``W+`` and
``W-`` are indexed by ``S(t, x)``; entry ``[(s, y), (u, z)]`` is the
probability that the chain started at ``y`` sits at ``z + u e_d`` (plus) or
``z - u e_d`` (minus) at time ``s``.  Both are lower triangular in canonical
order, and ``N_{t,x} = (W-)^{-1} W+`` maps payoff values above the boundary
to values below it.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Mapping, Sequence

from .distribution import evolve
from .exact import forward_substitution, matvec, signed_permutation_sum
from .kernel import StepKernel
from .lattice import InvalidAnchor, Site, SupportPoint, SupportSet, support_set

CRAMER_LIMIT = 8


class RegionViolation(ValueError):
    pass


class TooLarge(ValueError):
    pass


class Region(enum.Enum):
    UPPER = "upper"  # x_d > 0
    LOWER = "lower"  # x_d < 0

    def admits(self, site: Sequence[int]) -> bool:
        return site[-1] > 0 if self is Region.UPPER else site[-1] < 0


class Sign(enum.IntEnum):
    PLUS = 1
    MINUS = -1


class LatticeFunction(Mapping):
    """Finitely supported rational function confined to one side of the boundary."""

    def __init__(self, values: Mapping[Sequence[int], object] | None = None, region: Region = Region.UPPER):
        self.region = region
        self.values: dict[Site, Fraction] = {}
        for site, v in (values or {}).items():
            site = tuple(int(c) for c in site)
            v = Fraction(v)
            if v == 0:
                continue
            if not region.admits(site):
                raise RegionViolation(f"site {site} outside the {region.value} region")
            self.values[site] = v

    @classmethod
    def indicator(cls, site: Sequence[int], region: Region = Region.UPPER) -> "LatticeFunction":
        return cls({tuple(site): 1}, region)

    def __getitem__(self, site) -> Fraction:
        return self.values.get(tuple(site), Fraction(0))

    def __contains__(self, site) -> bool:
        return tuple(site) in self.values

    def __iter__(self) -> Iterator[Site]:
        return iter(self.values)

    def __len__(self) -> int:
        return len(self.values)

    def __eq__(self, other):
        if isinstance(other, LatticeFunction):
            return self.region is other.region and self.values == other.values
        return NotImplemented

    def __repr__(self) -> str:
        return f"LatticeFunction({self.values!r}, {self.region})"

    def scaled_sum(self, a, other: "LatticeFunction", b) -> "LatticeFunction":
        """Return ``a * self + b * other``."""
        if other.region is not self.region:
            raise RegionViolation("cannot combine functions on different regions")
        out = {z: Fraction(a) * v for z, v in self.values.items()}
        for z, v in other.values.items():
            out[z] = out.get(z, Fraction(0)) + Fraction(b) * v
        return LatticeFunction(out, self.region)

    def to_json(self, render=str) -> list[dict]:
        return [{"site": list(z), "value": render(v)} for z, v in sorted(self.values.items())]


def _require_upper(f: LatticeFunction) -> None:
    if not isinstance(f, LatticeFunction) or f.region is not Region.UPPER:
        raise RegionViolation("payoff must be a LatticeFunction on the upper region")


@dataclass(frozen=True)
class TriangularSystem:
    index: SupportSet
    sign: Sign
    entries: tuple[tuple[Fraction, ...], ...]

    @property
    def n(self) -> int:
        return len(self.entries)

    def diagonal(self) -> list[Fraction]:
        return [self.entries[i][i] for i in range(self.n)]

    def is_lower_triangular(self) -> bool:
        return all(self.entries[i][j] == 0 for i in range(self.n) for j in range(i + 1, self.n))

    def to_json(self, render=str) -> dict:
        return {
            "t": self.index.t,
            "x": list(self.index.x),
            "sign": "plus" if self.sign is Sign.PLUS else "minus",
            "rows": [[render(v) for v in row] for row in self.entries],
        }


@dataclass(frozen=True)
class CoefficientTable:
    t: int
    x: Site
    coeffs: dict[SupportPoint, Fraction]

    def apply(self, f: Mapping[Site, Fraction]) -> Fraction:
        """Value of ``Nf`` at ``x - t e_d``."""
        return sum((c * f[p.upper()] for p, c in self.coeffs.items() if p.upper() in f), Fraction(0))

    def to_json(self, render=str) -> dict:
        return {
            "t": self.t,
            "x": list(self.x),
            "coeffs": [{"s": p.s, "y": list(p.y), "c": render(c)} for p, c in self.coeffs.items()],
        }


def _shifted(p: SupportPoint, sign: int) -> Site:
    return p.upper() if sign > 0 else p.lower()


@lru_cache(maxsize=4096)
def _system(kernel: StepKernel, t: int, x: Site, sign: Sign) -> TriangularSystem:
    index = support_set(t, x, kernel.dimension)
    cols = [_shifted(p, sign) for p in index]
    rows = []
    for p in index:
        law = evolve(kernel, p.y, p.s)
        rows.append(tuple(law[c] for c in cols))
    return TriangularSystem(index, sign, tuple(rows))


def build_system(kernel: StepKernel, t: int, x: Sequence[int], sign: Sign | int) -> TriangularSystem:
    x = tuple(int(v) for v in x)
    if len(x) != kernel.dimension:
        raise InvalidAnchor(f"anchor {x} does not match kernel dimension {kernel.dimension}")
    return _system(kernel, t, x, Sign(sign))


def determinant(system: TriangularSystem) -> Fraction:
    det = Fraction(1)
    for v in system.diagonal():
        det *= v
    return det


def _solve(kernel: StepKernel, t: int, x: Site, f: Mapping[Site, Fraction]) -> tuple[SupportSet, list[Fraction]]:
    plus = build_system(kernel, t, x, Sign.PLUS)
    minus = build_system(kernel, t, x, Sign.MINUS)
    fvals = [f[p.upper()] if p.upper() in f else Fraction(0) for p in plus.index]
    rhs = matvec(plus.entries, fvals)
    return plus.index, forward_substitution(minus.entries, rhs)


def local_transform(kernel: StepKernel, t: int, x: Sequence[int], f: LatticeFunction) -> dict[SupportPoint, Fraction]:
    """``N_{t,x} f`` as a map from ``(s, y)`` to the value at ``y - s e_d``."""
    _require_upper(f)
    index, g = _solve(kernel, t, tuple(x), f)
    return dict(zip(index, g))


def transform_at(kernel: StepKernel, target: Sequence[int], f: LatticeFunction) -> Fraction:
    """``Nf(target)`` for a site strictly below the boundary, via the smallest anchor."""
    _require_upper(f)
    target = tuple(int(v) for v in target)
    if target[-1] >= 0:
        raise RegionViolation(f"target {target} is not strictly below the boundary")
    t = -target[-1]
    x = target[:-1] + (0,)
    _, g = _solve(kernel, t, x, f)
    return g[-1]


def transform_function(kernel: StepKernel, f: LatticeFunction, targets) -> LatticeFunction:
    """Materialise ``Nf`` on a finite set of lower sites."""
    return LatticeFunction({z: transform_at(kernel, z, f) for z in targets}, Region.LOWER)


@lru_cache(maxsize=1024)
def _transform_matrix(kernel: StepKernel, t: int, x: Site) -> tuple[tuple[Fraction, ...], ...]:
    plus = build_system(kernel, t, x, Sign.PLUS)
    minus = build_system(kernel, t, x, Sign.MINUS)
    n = plus.n
    cols = [forward_substitution(minus.entries, [plus.entries[i][j] for i in range(n)]) for j in range(n)]
    return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))


def transform_matrix(kernel: StepKernel, t: int, x: Sequence[int]) -> tuple[tuple[Fraction, ...], ...]:
    """Dense ``N_{t,x}`` in canonical order (row = lower point, column = upper point)."""
    return _transform_matrix(kernel, t, tuple(x))


def cramer_coefficients(kernel: StepKernel, t: int, x: Sequence[int], force: bool = False) -> CoefficientTable:
    """Coefficients of ``Nf(x - t e_d)`` from the signed permutation sum (Cramer's rule).

    For each ``(s, y)`` the numerator is the determinant of ``W-`` with the
    anchor column replaced by the ``(s, y)`` column of ``W+``; the denominator
    is the product of the ``W-`` diagonal.
    """
    x = tuple(int(v) for v in x)
    plus = build_system(kernel, t, x, Sign.PLUS)
    minus = build_system(kernel, t, x, Sign.MINUS)
    n = plus.n
    if n > CRAMER_LIMIT and not force:
        raise TooLarge(f"|S({t},{x})| = {n} exceeds {CRAMER_LIMIT}; pass force=True")
    denom = Fraction(1)
    for i in range(n):
        denom *= minus.entries[i][i]
    anchor = n - 1
    coeffs = {}
    for k, p in enumerate(plus.index):
        replaced = [
            [plus.entries[r][k] if c == anchor else minus.entries[r][c] for c in range(n)]
            for r in range(n)
        ]
        coeffs[p] = signed_permutation_sum(replaced) / denom
    return CoefficientTable(t, x, coeffs)


def coefficients_via_solve(kernel: StepKernel, t: int, x: Sequence[int]) -> CoefficientTable:
    """Same table as :func:`cramer_coefficients`, one indicator solve per support point."""
    x = tuple(int(v) for v in x)
    index = support_set(t, x, kernel.dimension)
    coeffs = {}
    for p in index:
        g = local_transform(kernel, t, x, LatticeFunction.indicator(p.upper()))
        coeffs[p] = g[index.anchor]
    return CoefficientTable(t, x, coeffs)
