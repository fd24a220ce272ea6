"""Special body families and triangle machinery.

Covers the equilateral sharpness configuration (triangle, its difference
hexagon, and the polar of the tripled triangle), inscribed-chord Reuleaux
polygons of width 1, and the excircle inequality chain for triangles with
semiperimeter at most 1.
"""

import math
from dataclasses import dataclass

from .bodies import ConvexBody, central_symmetrize, polar

__all__ = ["equilateral_triangle", "equilateral_config", "reuleaux",
           "TriangleData", "triangle_data", "zaslavsky_chain",
           "orbit_supporting_triangle"]


def equilateral_triangle(side=1.0):
    """Equilateral triangle with a horizontal bottom edge, centroid at origin."""
    s = float(side)
    h = s * math.sqrt(3.0)
    return ConvexBody.polygon([(-s / 2, -h / 6), (s / 2, -h / 6), (0.0, h / 3)])


def equilateral_config(scale=1.0):
    """The sharp difference-body configuration: (K, K - K, polar of 3K)."""
    if float(scale) <= 0:
        raise ValueError("scale must be positive")
    K = equilateral_triangle(scale)
    hexagon = central_symmetrize(K)
    T = polar(equilateral_triangle(3 * scale))
    return K, hexagon, T


def reuleaux(k, arc_segments=64):
    """Width-1 Reuleaux polygon on k vertices, chord-inscribed approximation.

    Each of the k circular arcs (radius 1, centered at the opposite vertex)
    is replaced by ``arc_segments`` equal-angle chords whose endpoints lie on
    the arc, so the polygon sits inside the true body and its width is
    1 - O((pi/k)^2 / (8 * arc_segments^2)).
    """
    if k < 3 or k % 2 == 0:
        raise ValueError("k must be an odd integer >= 3")
    if arc_segments < 8:
        raise ValueError("need arc_segments >= 8")
    R = 1.0 / (2.0 * math.cos(math.pi / (2 * k)))
    corners = [(R * math.cos(2 * math.pi * j / k + math.pi / 2),
                R * math.sin(2 * math.pi * j / k + math.pi / 2))
               for j in range(k)]
    pts = []
    for j in range(k):
        a = corners[j]
        b = corners[(j + 1) % k]
        c = corners[(j + (k + 1) // 2) % k]  # arc center: opposite vertex
        phi0 = math.atan2(a[1] - c[1], a[0] - c[0])
        phi1 = math.atan2(b[1] - c[1], b[0] - c[0])
        while phi1 <= phi0:
            phi1 += 2 * math.pi
        for t in range(arc_segments):
            phi = phi0 + (phi1 - phi0) * t / arc_segments
            pts.append((c[0] + math.cos(phi), c[1] + math.sin(phi)))
    return ConvexBody.polygon(pts)


# ---------------------------------------------------------------------------
# triangles with semiperimeter <= 1

@dataclass(frozen=True)
class TriangleData:
    a: float          # |BC|
    b: float          # |CA|
    c: float          # |AB|
    alpha: float      # angle at A
    beta: float       # angle at B
    gamma: float      # angle at C
    p: float          # semiperimeter
    A: tuple
    B: tuple
    C: tuple
    A1: tuple         # unit point along the bisector from A
    B1: tuple
    C1: tuple
    J_A: tuple        # excenter adjacent to BC
    T_A: tuple        # foot of the perpendicular from J_A onto line AB


def _unit(v):
    n = math.hypot(*v)
    return (v[0] / n, v[1] / n)


def triangle_data(a, b, c):
    """Coordinates and bisector data for side lengths (a, b, c), A at the
    origin and B on the positive x axis."""
    for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
        if x + y <= z:
            raise ValueError("side lengths violate the triangle inequality")
    cos_a = (b * b + c * c - a * a) / (2 * b * c)
    cos_b = (a * a + c * c - b * b) / (2 * a * c)
    alpha = math.acos(max(-1.0, min(1.0, cos_a)))
    beta = math.acos(max(-1.0, min(1.0, cos_b)))
    gamma = math.pi - alpha - beta
    A = (0.0, 0.0)
    B = (c, 0.0)
    C = (b * math.cos(alpha), b * math.sin(alpha))
    A1 = (math.cos(alpha / 2), math.sin(alpha / 2))
    B1 = (c - math.cos(beta / 2), math.sin(beta / 2))
    uc = _unit((A[0] - C[0], A[1] - C[1]))
    ub = _unit((B[0] - C[0], B[1] - C[1]))
    w = _unit((uc[0] + ub[0], uc[1] + ub[1]))
    C1 = (C[0] + w[0], C[1] + w[1])
    s = -a + b + c
    J_A = ((-a * A[0] + b * B[0] + c * C[0]) / s,
           (-a * A[1] + b * B[1] + c * C[1]) / s)
    T_A = (J_A[0], 0.0)
    return TriangleData(a=a, b=b, c=c, alpha=alpha, beta=beta, gamma=gamma,
                        p=(a + b + c) / 2, A=A, B=B, C=C, A1=A1, B1=B1, C1=C1,
                        J_A=J_A, T_A=T_A)


def zaslavsky_chain(tri):
    """The excircle inequality chain for a triangle with semiperimeter <= 1.

    Returns (lhs, bound) where lhs is the squared bisector-endpoint distance
    written through its projections on and across the AB line, and bound is

        1 + (1-c)^2 + 2c (1 - cos(alpha/2)) (1 - cos(beta/2)).

    Asserts lhs >= bound > 1.
    """
    if tri.p > 1 + 1e-12:
        raise ValueError("chain requires semiperimeter <= 1")
    ca, cb = math.cos(tri.alpha / 2), math.cos(tri.beta / 2)
    sa, sb = math.sin(tri.alpha / 2), math.sin(tri.beta / 2)
    lhs = (ca + cb - tri.c) ** 2 + (sa - sb) ** 2
    bound = 1 + (1 - tri.c) ** 2 + 2 * tri.c * (1 - ca) * (1 - cb)
    if not (lhs >= bound - 1e-12 and bound > 1):
        raise AssertionError(
            f"chain violated: lhs={lhs!r} bound={bound!r} for {tri}")
    return lhs, bound


def orbit_supporting_triangle(A, B, C):
    """Triangle of supporting lines through the orbit points A, B, C,
    each orthogonal to the interior bisector there; the inputs are the feet
    of its altitudes.  Returned centered so the origin is interior."""
    pts = [tuple(map(float, P)) for P in (A, B, C)]

    def bisector(i):
        P = pts[i]
        Q, R = pts[(i + 1) % 3], pts[(i + 2) % 3]
        u = _unit((Q[0] - P[0], Q[1] - P[1]))
        v = _unit((R[0] - P[0], R[1] - P[1]))
        return _unit((u[0] + v[0], u[1] + v[1]))

    lines = []
    for i in range(3):
        n = bisector(i)
        lines.append((n, n[0] * pts[i][0] + n[1] * pts[i][1]))
    corners = []
    for i in range(3):
        (n1, c1), (n2, c2) = lines[i], lines[(i + 1) % 3]
        det = n1[0] * n2[1] - n1[1] * n2[0]
        corners.append((((c1 * n2[1] - c2 * n1[1]) / det),
                        ((n1[0] * c2 - n2[0] * c1) / det)))
    cx = sum(p[0] for p in corners) / 3
    cy = sum(p[1] for p in corners) / 3
    return ConvexBody.polygon([(p[0] - cx, p[1] - cy) for p in corners])
