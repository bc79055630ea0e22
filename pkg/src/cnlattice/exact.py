"""Small exact linear-algebra kernels over ``fractions.Fraction``."""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations
from typing import Sequence

Matrix = Sequence[Sequence[Fraction]]


def permutation_sign(perm: Sequence[int]) -> int:
    """Sign of a permutation of ``range(n)`` from its cycle decomposition."""
    seen = [False] * len(perm)
    sign = 1
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def leibniz_determinant(a: Matrix) -> Fraction:
    """Determinant as the full sum over all ``n!`` permutations, no shortcuts."""
    n = len(a)
    total = Fraction(0)
    for perm in permutations(range(n)):
        term = Fraction(permutation_sign(perm))
        for col, row in enumerate(perm):
            term *= a[row][col]
        total += term
    return total


def signed_permutation_sum(a: Matrix) -> Fraction:
    """``sum_sigma sgn(sigma) prod_k a[sigma(k)][k]``, skipping terms with a zero factor.

    Depth-first over columns; the sign is tracked through the inversion count so
    every surviving term is produced exactly once.
    """
    n = len(a)
    used = [False] * n
    total = Fraction(0)

    def walk(col: int, acc: Fraction, inversions: int) -> None:
        nonlocal total
        if col == n:
            total += acc if inversions % 2 == 0 else -acc
            return
        for row in range(n):
            if used[row]:
                continue
            entry = a[row][col]
            if entry == 0:
                continue
            # Rows already placed at earlier columns that exceed ``row`` form inversions.
            extra = sum(1 for r in range(row + 1, n) if used[r])
            used[row] = True
            walk(col + 1, acc * entry, inversions + extra)
            used[row] = False

    walk(0, Fraction(1), 0)
    return total


def forward_substitution(lower: Matrix, rhs: Sequence[Fraction]) -> list[Fraction]:
    """Solve ``lower @ x = rhs`` for lower-triangular ``lower`` with nonzero diagonal."""
    n = len(lower)
    x: list[Fraction] = [Fraction(0)] * n
    for i in range(n):
        row = lower[i]
        acc = rhs[i]
        for j in range(i):
            if row[j]:
                acc -= row[j] * x[j]
        if row[i] == 0:
            raise ZeroDivisionError(f"zero pivot at row {i}")
        x[i] = acc / row[i]
    return x


def matvec(a: Matrix, v: Sequence[Fraction]) -> list[Fraction]:
    return [sum((r[j] * v[j] for j in range(len(v)) if r[j]), Fraction(0)) for r in a]
