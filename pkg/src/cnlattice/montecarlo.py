"""Monte Carlo replication of the static barrier hedge.

Path ``i`` consumes words ``[i*T, (i+1)*T)`` of a Philox stream keyed by the
seed, so a path's draws never depend on how the work is chunked.  Estimates
are formed from integer counts of terminal states, which keeps the reduction
exact and order independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .distribution import StartOnBoundary, evolve
from .kernel import StepKernel
from .lattice import Site
from .transform import LatticeFunction, Region, RegionViolation, transform_function
from .verify import barrier_parity

CHUNK = 1 << 16  # multiple of 4: chunk starts align with Philox blocks


@dataclass(frozen=True)
class McEstimate:
    value: float
    std_error: float
    n_paths: int
    seed: int

    def to_json(self) -> dict:
        return {
            "value": f"{self.value:.15g}",
            "std_error": f"{self.std_error:.15g}",
            "n_paths": self.n_paths,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class HedgeResult:
    knocked_out: McEstimate  # E[f(Z_T); tau > T]
    static_hedge: McEstimate  # E[f(Z_T) - Nf(Z_T)]
    exact_knocked_out: Fraction
    exact_static_hedge: Fraction

    def to_json(self, render=str) -> dict:
        return {
            "lhs": self.knocked_out.to_json(),
            "rhs": self.static_hedge.to_json(),
            "exact": {"lhs": render(self.exact_knocked_out), "rhs": render(self.exact_static_hedge)},
        }


def _estimate(counts: np.ndarray, values: list[Fraction], n: int, seed: int) -> McEstimate:
    first = sum((int(c) * v for c, v in zip(counts, values) if c), Fraction(0))
    second = sum((int(c) * v * v for c, v in zip(counts, values) if c), Fraction(0))
    mean = first / n
    if n == 1:
        return McEstimate(float(mean), 0.0, n, seed)
    var = (second - n * mean * mean) / (n - 1)
    return McEstimate(float(mean), math.sqrt(var / n), n, seed)


class _Box:
    """Dense indexing of the L-infinity box of radius ``r`` around ``center``."""

    def __init__(self, center: Site, r: int):
        self.center = np.asarray(center, dtype=np.int64)
        self.r = r
        self.width = 2 * r + 1
        self.d = len(center)
        self.strides = self.width ** np.arange(self.d - 1, -1, -1, dtype=np.int64)

    @property
    def size(self) -> int:
        return self.width**self.d

    def index(self, pos: np.ndarray) -> np.ndarray:
        return (pos - self.center + self.r) @ self.strides

    def site(self, k: int) -> Site:
        coords = []
        for stride in self.strides:
            coords.append(int(k // stride))
            k %= stride
        return tuple(int(c) for c in np.asarray(coords) + self.center - self.r)


def mc_hedge(
    kernel: StepKernel,
    x0: Sequence[int],
    T: int,
    f: LatticeFunction,
    n_paths: int,
    seed: int,
) -> HedgeResult:
    """Simulate ``n_paths`` trajectories and estimate both sides of the barrier parity."""
    if f.region is not Region.UPPER:
        raise RegionViolation("payoff must live on the upper region")
    if n_paths < 1:
        raise ValueError("n_paths must be >= 1")
    x0 = tuple(int(v) for v in x0)
    if x0[-1] == 0:
        raise StartOnBoundary(f"start {x0} lies on the boundary")
    if x0[-1] < 0:
        raise ValueError(f"start {x0} lies below the boundary")
    exact = barrier_parity(kernel, x0, T, f)
    law = evolve(kernel, x0, T)
    nf = transform_function(kernel, f, sorted(z for z in law if z[-1] < 0))

    d = kernel.dimension
    box = _Box(x0, max(T, 1))
    cum = np.empty((box.size, 2 * d))
    for k in range(box.size):
        acc = Fraction(0)
        for j, p in enumerate(kernel.probs_at(box.site(k))):
            acc += p
            cum[k, j] = float(acc)
    cum[:, -1] = 1.0
    moves = np.zeros((2 * d, d), dtype=np.int64)
    for j in range(2 * d):
        moves[j, j // 2] = 1 if j % 2 == 0 else -1

    # Terminal state code: box index, plus box.size when the path survived.
    counts = np.zeros(2 * box.size, dtype=np.int64)
    for start in range(0, n_paths, CHUNK):
        m = min(CHUNK, n_paths - start)
        bitgen = np.random.Philox(key=seed)
        bitgen.advance(start * T // 4)
        raw = bitgen.random_raw(m * T).reshape(m, T) if T else np.zeros((m, 0), dtype=np.uint64)
        u = (raw >> np.uint64(11)).astype(np.float64) * 2.0**-53
        pos = np.tile(np.asarray(x0, dtype=np.int64), (m, 1))
        alive = np.ones(m, dtype=bool)
        for step in range(T):
            rows = cum[box.index(pos)]
            choice = (u[:, step : step + 1] >= rows).sum(axis=1)
            pos += moves[choice]
            alive &= pos[:, -1] != 0
        codes = box.index(pos) + np.where(alive, box.size, 0)
        counts += np.bincount(codes, minlength=2 * box.size)

    lhs_vals, rhs_vals = [], []
    for code in range(2 * box.size):
        z = box.site(code % box.size)
        survived = code >= box.size
        lhs_vals.append(f[z] if survived else Fraction(0))
        rhs_vals.append(f[z] - nf[z])
    return HedgeResult(
        _estimate(counts, lhs_vals, n_paths, seed),
        _estimate(counts, rhs_vals, n_paths, seed),
        exact.lhs,
        exact.rhs,
    )
