"""Enumeration of integer points by L1 shells.

Shells of the cross-polytope are walked in lexicographic order, either over
all orthants or restricted to the nonnegative orthant.  Every search in the
degree-bound machinery consumes points in exactly this order, which is what
pins down witness tie-breaking.
"""

from __future__ import annotations

MODES = ("all", "nonnegative")


def shell_points(dimension, radius, mode="all"):
    """Yield the points with l1norm == radius, lexicographically ascending.

    shell_points(2, 1) gives (-1, 0), (0, -1), (0, 1), (1, 0); in mode
    "nonnegative" the same shell is (0, 1), (1, 0).
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if dimension < 1 or radius < 0:
        raise ValueError("need dimension >= 1 and radius >= 0")
    nonneg = mode == "nonnegative"

    def rec(prefix, dims_left, budget):
        if dims_left == 1:
            if budget == 0:
                yield prefix + (0,)
            elif nonneg:
                yield prefix + (budget,)
            else:
                yield prefix + (-budget,)
                yield prefix + (budget,)
            return
        lo = 0 if nonneg else -budget
        for first in range(lo, budget + 1):
            yield from rec(prefix + (first,), dims_left - 1, budget - abs(first))

    yield from rec((), dimension, radius)


def points_up_to(dimension, radius, mode="all"):
    """All points with l1norm <= radius, ordered by shell then lex."""
    for d in range(radius + 1):
        yield from shell_points(dimension, d, mode)


def lattice_points_up_to(L, radius, mode="all"):
    """Members of L with l1norm <= radius, ordered by shell then lex."""
    return [v for v in points_up_to(L.dimension, radius, mode) if v in L]


def shell_count(dimension, radius, mode="all"):
    """Closed-form size of one shell (composition counting, no enumeration)."""
    from math import comb

    if radius == 0:
        return 1
    if mode == "nonnegative":
        return comb(radius + dimension - 1, dimension - 1)
    return sum(
        2 ** k * comb(dimension, k) * comb(radius - 1, k - 1)
        for k in range(1, min(dimension, radius) + 1)
    )
