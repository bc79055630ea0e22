"""Support sets S(t, x) indexing the boundary systems.

A support point ``(s, y)`` pairs a time ``s >= 1`` with a boundary site ``y``
(last coordinate zero).  ``S(t, x)`` collects the points with
``s + |y - x|_1 <= t`` and ``t - s - |y - x|_1`` even; these are exactly the
pairs for which ``y + s e_d`` and ``y - s e_d`` are reachable from ``x`` at
time ``t``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, NamedTuple, Sequence

Site = tuple[int, ...]


class InvalidAnchor(ValueError):
    """Raised for an anchor ``(t, x)`` with ``t < 1`` or ``x`` off the boundary."""


class NotMember(LookupError):
    pass


class SupportPoint(NamedTuple):
    # Tuple ordering on (s, y) is the canonical order.
    s: int
    y: Site

    def upper(self) -> Site:
        return self.y[:-1] + (self.s,)

    def lower(self) -> Site:
        return self.y[:-1] + (-self.s,)


def l1_norm(a: Sequence[int], b: Sequence[int] | None = None) -> int:
    if b is None:
        return sum(abs(v) for v in a)
    return sum(abs(u - v) for u, v in zip(a, b))


def l1_sphere(center: Sequence[int], radius: int) -> Iterator[Site]:
    """Yield every integer point at L1 distance exactly ``radius`` from ``center``."""
    center = tuple(center)
    if not center:
        if radius == 0:
            yield ()
        return
    head, rest = center[0], center[1:]
    for off in range(-radius, radius + 1):
        remaining = radius - abs(off)
        if not rest:
            if remaining == 0:
                yield (head + off,)
            continue
        for tail in l1_sphere(rest, remaining):
            yield (head + off,) + tail


def l1_ball(center: Sequence[int], radius: int) -> Iterator[Site]:
    for r in range(radius + 1):
        yield from l1_sphere(center, r)


def on_boundary(site: Sequence[int]) -> bool:
    return len(site) >= 1 and site[-1] == 0


def _check_anchor(t: int, x: Sequence[int]) -> None:
    if t < 1:
        raise InvalidAnchor(f"time must be >= 1, got {t}")
    if not on_boundary(x):
        raise InvalidAnchor(f"anchor site {tuple(x)} is not on the boundary x_d = 0")


@dataclass(frozen=True)
class SupportSet:
    t: int
    x: Site
    points: tuple[SupportPoint, ...]
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_index", {p: i for i, p in enumerate(self.points)})

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[SupportPoint]:
        return iter(self.points)

    def __contains__(self, p: object) -> bool:
        return p in self._index

    @property
    def anchor(self) -> SupportPoint:
        return SupportPoint(self.t, self.x)

    def order_index(self, p: SupportPoint) -> int:
        try:
            return self._index[p]
        except KeyError:
            raise NotMember(f"{p} is not in S({self.t}, {self.x})") from None

    def to_json(self) -> dict:
        return {
            "t": self.t,
            "x": list(self.x),
            "points": [{"s": p.s, "y": list(p.y)} for p in self.points],
        }


@lru_cache(maxsize=4096)
def _support_points(t: int, x: Site) -> tuple[SupportPoint, ...]:
    head = x[:-1]
    pts = []
    for s in range(1, t + 1):
        r = t - s
        # Only the spheres with matching parity contribute.
        for k in range(r % 2, r + 1, 2):
            for y_head in l1_sphere(head, k):
                pts.append(SupportPoint(s, y_head + (0,)))
    pts.sort()
    return tuple(pts)


def support_set(t: int, x: Sequence[int], d: int | None = None) -> SupportSet:
    """Return ``S(t, x)`` in canonical order (ascending ``s``, then lexicographic ``y``)."""
    x = tuple(int(v) for v in x)
    if d is not None and len(x) != d:
        raise InvalidAnchor(f"anchor {x} does not have dimension {d}")
    _check_anchor(t, x)
    return SupportSet(t, x, _support_points(t, x))


def is_member(t: int, x: Sequence[int], s: int, y: Sequence[int]) -> bool:
    if not (on_boundary(x) and on_boundary(y)) or len(x) != len(y):
        return False
    if s < 1 or s > t:
        return False
    gap = t - s - l1_norm(x, y)
    return gap >= 0 and gap % 2 == 0


def order_index(sset: SupportSet, p: SupportPoint) -> int:
    return sset.order_index(SupportPoint(p[0], tuple(p[1])))
