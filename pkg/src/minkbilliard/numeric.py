"""Scalar and small-vector helpers.

Points are plain tuples of numbers.  The exact code path keeps every entry a
`fractions.Fraction`; the floating path uses `float`.  Nothing here promotes
exact values to float behind the caller's back.
"""

import math
from fractions import Fraction

from .errors import DimensionMismatch

EPS = 1e-9  # global tolerance for floating-point geometric predicates


def is_exact_scalar(x):
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def all_exact(coords):
    return all(is_exact_scalar(c) for c in coords)


def coerce_point(point, exact):
    """Normalize one point to all-Fraction (exact) or all-float coordinates."""
    if exact:
        return tuple(Fraction(c) for c in point)
    return tuple(float(c) for c in point)


def dot(a, b):
    if len(a) != len(b):
        raise DimensionMismatch(f"dot of lengths {len(a)} and {len(b)}")
    return sum(x * y for x, y in zip(a, b))


def vadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def vsub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def vneg(a):
    return tuple(-x for x in a)


def vscale(s, a):
    return tuple(s * x for x in a)


def norm2(a):
    return math.sqrt(sum(float(x) * float(x) for x in a))


def close(a, b, tol=EPS):
    return abs(float(a) - float(b)) <= tol


def points_close(a, b, tol=EPS):
    return all(abs(float(x) - float(y)) <= tol for x, y in zip(a, b))
