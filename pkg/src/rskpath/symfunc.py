"""Schur polynomials over exact rationals, plus the chamber harmonic.

Everything here computes with fractions.Fraction end to end.  schur()
prefers the bialternant determinant ratio, which needs pairwise
distinct coordinates, and falls back to summing over column-strict
fillings (as horizontal strips, one letter at a time); the two routes
are compared in the tests.

The harmonic function for the ordered walk lives at the end: for a
point x with nondecreasing coordinates, h(x) = p^(-x) s_(x*)(r), where
x* reverses x into a partition.  Branching over one added cell makes it
invariant under the walk kernel whenever |r| = 1.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cache
from typing import Sequence

from rskpath.tableaux import horizontal_strips, is_partition, strip_zeros

Point = tuple[Fraction, ...]


def as_point(xs: Sequence) -> Point:
    return tuple(Fraction(v) for v in xs)


def schur(lam: Sequence[int], x: Sequence) -> Fraction:
    """s_lam(x), exactly."""
    lam = strip_zeros(lam)
    pt = as_point(x)
    if len(set(pt)) == len(pt) and all(pt):
        return schur_bialternant(lam, pt)
    return schur_combinatorial(lam, pt)


def schur_combinatorial(lam: Sequence[int], x: Sequence) -> Fraction:
    """Sum of x^weight over column-strict fillings of lam."""
    return skew_schur(lam, (), x)


def skew_schur(lam: Sequence[int], mu: Sequence[int], x: Sequence) -> Fraction:
    """Sum of x^weight over column-strict fillings of the skew shape lam/mu."""
    lam = strip_zeros(lam)
    mu = strip_zeros(mu)
    if not is_partition(lam) or not is_partition(mu):
        raise ValueError("shapes must be partitions")
    if len(mu) > len(lam) or any(m > l for l, m in zip(lam, mu)):
        return Fraction(0)
    return _strip_sum(lam, mu, as_point(x))


@cache
def _strip_sum(lam: tuple[int, ...], done: tuple[int, ...], x: Point) -> Fraction:
    if not x:
        return Fraction(int(done == lam))
    total = Fraction(0)
    budget = sum(lam) - sum(done)
    for size in range(budget + 1):
        factor = x[0] ** size
        for nxt in horizontal_strips(done, size):
            if len(nxt) > len(lam) or any(a > b for a, b in zip(nxt, lam)):
                continue
            total += factor * _strip_sum(lam, nxt, x[1:])
    return total


def schur_bialternant(lam: Sequence[int], x: Sequence) -> Fraction:
    """det(x_j^(lam_i + n - i)) / det(x_j^(n - i)); x must be distinct."""
    pt = as_point(x)
    n = len(pt)
    if len(set(pt)) != n:
        raise ValueError("bialternant needs pairwise distinct coordinates")
    lam = strip_zeros(lam)
    if len(lam) > n:
        return Fraction(0)
    padded = tuple(lam) + (0,) * (n - len(lam))
    num = _det([[pt[j] ** (padded[i] + n - 1 - i) for j in range(n)] for i in range(n)])
    den = _det([[pt[j] ** (n - 1 - i) for j in range(n)] for i in range(n)])
    return num / den


def _det(rows: list[list[Fraction]]) -> Fraction:
    n = len(rows)
    rows = [list(r) for r in rows]
    sign = 1
    out = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if rows[r][col]), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            sign = -sign
        out *= rows[col][col]
        inv = 1 / rows[col][col]
        for r in range(col + 1, n):
            factor = rows[r][col] * inv
            if factor:
                for c in range(col, n):
                    rows[r][c] -= factor * rows[col][c]
    return sign * out


def power_product(base: Sequence, exponents: Sequence[int]) -> Fraction:
    """base^exponents with negative exponents allowed; exact."""
    out = Fraction(1)
    for b, e in zip(base, exponents, strict=True):
        out *= Fraction(b) ** e
    return out


def harmonic_h(p: Sequence, r: Sequence, x: Sequence[int]) -> Fraction:
    """p^(-x) s_(x*)(r) on nondecreasing x, else 0.

    p is the walk's step distribution and r any probability vector;
    with |r| = 1 this is invariant for the p-walk killed on leaving
    the ordered chamber.
    """
    x = tuple(int(v) for v in x)
    if any(a > b for a, b in zip(x, x[1:])) or any(v < 0 for v in x):
        return Fraction(0)
    return power_product(p, [-v for v in x]) * schur(x[::-1], r)
