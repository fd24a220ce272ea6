"""Convex bodies and the Minkowski-geometry primitives built on them.

A :class:`ConvexBody` is either a polytope carrying synchronized vertex and
facet representations, or a Euclidean ball treated analytically.  Polytopes
whose coordinates are all ints/Fractions are kept exact (every coordinate a
`Fraction`); anything else is cast to float and compared with the global
tolerance ``EPS``.

The operations here are pure functions of immutable inputs and are safe to
call concurrently.
"""

import itertools
import json
import math
from fractions import Fraction
from functools import cmp_to_key

import numpy as np

from .errors import DimensionMismatch, InvalidBody
from .numeric import (EPS, all_exact, coerce_point, dot, norm2, vadd, vneg,
                      vscale, vsub)

__all__ = [
    "ConvexBody", "gauge_norm", "support", "polar", "reflect",
    "central_symmetrize", "minkowski_sum", "width", "body_to_json",
    "body_from_json",
]


# ---------------------------------------------------------------------------
# low-level exact/float linear algebra (tiny systems only)

def _solve_linear(rows, rhs):
    """Gaussian elimination for an n x n system; None if singular.

    Works for Fraction and float entries alike.  Pivot tolerance is zero for
    exact rows and scale-relative for floats.
    """
    n = len(rows)
    a = [list(r) + [b] for r, b in zip(rows, rhs)]
    exact = all(all_exact(r) for r in rows) and all_exact(rhs)
    scale = max((abs(float(x)) for r in a for x in r), default=1.0) or 1.0
    tol = 0 if exact else EPS * scale
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(float(a[r][col])))
        if abs(float(a[piv][col])) <= tol:
            return None
        a[col], a[piv] = a[piv], a[col]
        inv = a[col][col]
        for r in range(n):
            if r == col:
                continue
            f = a[r][col] / inv
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return tuple(a[i][n] / a[i][i] for i in range(n))


def _hyperplane_through(points):
    """Normal/offset (n, c) of the hyperplane through dim points, or None."""
    dim = len(points[0])
    base = points[0]
    rows = [vsub(p, base) for p in points[1:]]
    # Solve for a null vector of the (dim-1) x dim system rows @ n = 0 by
    # fixing each coordinate of n to 1 in turn.
    for fixed in range(dim):
        sub = [[r[j] for j in range(dim) if j != fixed] for r in rows]
        rhs = [-r[fixed] for r in rows]
        if len(sub) != dim - 1:
            return None
        sol = _solve_linear(sub, rhs) if dim > 1 else ()
        if sol is None:
            continue
        n = list(sol[:fixed]) + [sol[0] * 0 + 1] + list(sol[fixed:])
        n = tuple(n)
        return n, dot(n, base)
    return None


def _cross2(a, b):
    return a[0] * b[1] - a[1] * b[0]


def _angle_cmp(u, v):
    """Counterclockwise comparison of nonzero 2-vectors starting at +x axis."""

    def half(w):
        if w[1] > 0 or (w[1] == 0 and w[0] > 0):
            return 0
        return 1

    hu, hv = half(u), half(v)
    if hu != hv:
        return -1 if hu < hv else 1
    c = _cross2(u, v)
    if c > 0:
        return -1
    if c < 0:
        return 1
    return 0


def convex_hull_2d(points):
    """Monotone-chain hull, counterclockwise, interior/collinear points dropped.

    Exact for Fraction input; float input uses a scale-relative tolerance for
    the collinearity test.
    """
    pts = sorted(set(points))
    if len(pts) <= 2:
        return list(pts)
    exact = all(all_exact(p) for p in pts)
    if exact:
        tol = 0
    else:
        scale = max(abs(c) for p in pts for c in p) or 1.0
        tol = EPS * scale * scale

    def cross(o, a, b):
        return _cross2(vsub(a, o), vsub(b, o))

    lower = []
    for p in pts:
        while len(lower) > 1 and cross(lower[-2], lower[-1], p) <= tol:
            lower.pop()
        lower.append(p)
    upper = []
    for p in reversed(pts):
        while len(upper) > 1 and cross(upper[-2], upper[-1], p) <= tol:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


# ---------------------------------------------------------------------------
# representation synthesis for small dimensions

def _facets_from_vertices_2d(verts):
    m = len(verts)
    facets = []
    for i in range(m):
        a, b = verts[i], verts[(i + 1) % m]
        e = vsub(b, a)
        n = (e[1], -e[0])  # outward for a counterclockwise polygon
        facets.append((n, dot(n, a)))
    return facets


def _vertices_from_facets_2d(facets):
    facets = sorted(facets, key=cmp_to_key(lambda f, g: _angle_cmp(f[0], g[0])))
    m = len(facets)
    verts = []
    for i in range(m):
        (n1, c1), (n2, c2) = facets[i], facets[(i + 1) % m]
        sol = _solve_linear([n1, n2], [c1, c2])
        if sol is None:
            raise InvalidBody("parallel adjacent facets")
        verts.append(sol)
    return verts


def _facets_from_vertices_nd(verts, dim):
    facets = {}
    for combo in itertools.combinations(range(len(verts)), dim):
        hp = _hyperplane_through([verts[i] for i in combo])
        if hp is None:
            continue
        n, c = hp
        exact = all_exact(n) and all_exact([c])
        scale = max(abs(float(dot(n, v) - c)) for v in verts) or 1.0
        tol = 0 if exact else EPS * max(1.0, scale)
        vals = [dot(n, v) - c for v in verts]
        if all(float(v) <= tol for v in vals):
            pass
        elif all(float(v) >= -tol for v in vals):
            n, c = vneg(n), -c
        else:
            continue
        if float(c) <= 0:
            raise InvalidBody("origin not strictly interior")
        key = tuple(x / c for x in n) if exact else tuple(
            round(float(x) / float(c), 12) for x in n)
        facets.setdefault(key, (n, c))
    if not facets:
        raise InvalidBody("no facets found")
    return list(facets.values())


def _vertices_from_facets_nd(facets, dim):
    verts = {}
    exact = all(all_exact(n) and all_exact([c]) for n, c in facets)
    for combo in itertools.combinations(range(len(facets)), dim):
        rows = [facets[i][0] for i in combo]
        rhs = [facets[i][1] for i in combo]
        sol = _solve_linear(rows, rhs)
        if sol is None:
            continue
        scale = max(1.0, max(abs(float(x)) for x in sol))
        tol = 0 if exact else EPS * scale
        if all(float(dot(n, sol) - c) <= tol for n, c in facets):
            key = sol if exact else tuple(round(float(x), 12) for x in sol)
            verts.setdefault(key, sol)
    if not verts:
        raise InvalidBody("no vertices found")
    return sorted(verts.values())


# ---------------------------------------------------------------------------

class ConvexBody:
    """Polytope with dual representations, or a Euclidean ball.

    Polytopes require the origin strictly interior (all facet offsets
    positive); this is what makes polar duality and the gauge formulas work.
    """

    def __init__(self, kind, dim, vertices=None, facets=None, radius=None,
                 validate=True):
        self.kind = kind
        self.dim = dim
        self.radius = radius
        if kind == "ball":
            if radius is None or float(radius) <= 0:
                raise InvalidBody("ball needs a positive radius")
            self.vertices = None
            self.facets = None
            self.exact = False
            return
        if kind != "polytope":
            raise InvalidBody(f"unknown body kind {kind!r}")
        if vertices is None and facets is None:
            raise InvalidBody("polytope needs vertices or facets")

        coords = []
        if vertices is not None:
            coords += [c for v in vertices for c in v]
        if facets is not None:
            coords += [c for n, _ in facets for c in n]
            coords += [c for _, c in facets]
        self.exact = all_exact(coords)

        if vertices is not None:
            vertices = [coerce_point(v, self.exact) for v in vertices]
        if facets is not None:
            facets = [(coerce_point(n, self.exact),
                       Fraction(c) if self.exact else float(c))
                      for n, c in facets]

        if vertices is None:
            vertices = (_vertices_from_facets_2d(facets) if dim == 2
                        else _vertices_from_facets_nd(facets, dim))
        if dim == 2:
            vertices = convex_hull_2d(vertices)
        if facets is None:
            if dim == 1:
                lo = min(v[0] for v in vertices)
                hi = max(v[0] for v in vertices)
                vertices = [(lo,), (hi,)]
                facets = [((self._one(),), hi), ((-self._one(),), -lo)]
            elif dim == 2:
                facets = _facets_from_vertices_2d(vertices)
            elif dim <= 4:
                facets = _facets_from_vertices_nd(vertices, dim)
            else:
                raise InvalidBody("facet synthesis implemented for dim <= 4")
        self.vertices = tuple(tuple(v) for v in vertices)
        self.facets = tuple((tuple(n), c) for n, c in facets)
        if validate:
            self._validate()
        self._cache = {}

    def _one(self):
        return Fraction(1) if self.exact else 1.0

    # -- construction helpers ------------------------------------------------

    @classmethod
    def polygon(cls, vertices):
        return cls("polytope", 2, vertices=vertices)

    @classmethod
    def polytope(cls, vertices=None, facets=None, dim=None):
        if dim is None:
            if vertices is not None:
                dim = len(vertices[0])
            else:
                dim = len(facets[0][0])
        return cls("polytope", dim, vertices=vertices, facets=facets)

    @classmethod
    def ball(cls, radius, dim=2):
        return cls("ball", dim, radius=radius)

    @classmethod
    def segment(cls, lo=-1, hi=1):
        return cls("polytope", 1, vertices=[(lo,), (hi,)])

    # -- invariants ----------------------------------------------------------

    def _validate(self):
        tol = 0 if self.exact else EPS * max(1.0, self.scale())
        for n, c in self.facets:
            if float(c) <= 0:
                raise InvalidBody("origin not strictly interior")
            on = 0
            for v in self.vertices:
                val = float(dot(n, v) - c)
                if val > float(tol) + (0 if self.exact else EPS):
                    raise InvalidBody("vertex outside a facet halfspace")
                if abs(val) <= float(tol) + (0 if self.exact else EPS):
                    on += 1
            if on < self.dim:
                raise InvalidBody("facet touching fewer than dim vertices")

    def scale(self):
        if self.kind == "ball":
            return float(self.radius)
        return max(abs(float(c)) for v in self.vertices for c in v)

    # -- cached numpy views ----------------------------------------------------

    def vertex_array(self):
        arr = self._cache.get("V") if self.kind == "polytope" else None
        if arr is None and self.kind == "polytope":
            arr = np.array([[float(c) for c in v] for v in self.vertices])
            self._cache["V"] = arr
        return arr

    def facet_arrays(self):
        """(normals, offsets) as float arrays."""
        cached = self._cache.get("F")
        if cached is None:
            normals = np.array([[float(c) for c in n] for n, _ in self.facets])
            offsets = np.array([float(c) for _, c in self.facets])
            cached = (normals, offsets)
            self._cache["F"] = cached
        return cached

    # -- predicates ------------------------------------------------------------

    def contains(self, x, tol=None):
        if self.kind == "ball":
            return norm2(x) <= float(self.radius) + (tol if tol else EPS)
        if tol is None:
            tol = 0 if self.exact and all_exact(x) else EPS * max(1.0, self.scale())
        return all(float(dot(n, x) - c) <= float(tol) for n, c in self.facets)

    def facets_containing(self, x, tol=None):
        """Indices of facets whose hyperplane passes through x."""
        if tol is None:
            tol = 0 if self.exact and all_exact(x) else EPS * max(1.0, self.scale())
        out = []
        for j, (n, c) in enumerate(self.facets):
            if abs(float(dot(n, x) - c)) <= float(tol):
                out.append(j)
        return out

    def facet_vertex_indices(self, j):
        key = ("fv", j)
        got = self._cache.get(key)
        if got is None:
            n, c = self.facets[j]
            tol = 0 if self.exact else EPS * max(1.0, self.scale())
            got = tuple(i for i, v in enumerate(self.vertices)
                        if abs(float(dot(n, v) - c)) <= float(tol))
            self._cache[key] = got
        return got

    def is_centrally_symmetric(self, tol=None):
        if self.kind == "ball":
            return True
        if tol is None:
            tol = EPS * max(1.0, self.scale())
        fwd = sorted(tuple(round(float(c) / tol) for c in v) for v in self.vertices)
        bwd = sorted(tuple(round(-float(c) / tol) for c in v) for v in self.vertices)
        return fwd == bwd

    # -- 2D boundary parametrization (floats; used by the optimizer) -----------

    def perimeter(self):
        if self.kind == "ball":
            return 2 * math.pi * float(self.radius)
        if self.dim != 2:
            raise DimensionMismatch("perimeter is 2D only")
        cum = self._boundary_tables()[0]
        return cum[-1]

    def diameter(self):
        if self.kind == "ball":
            return 2 * float(self.radius)
        V = self.vertex_array()
        d2 = ((V[:, None, :] - V[None, :, :]) ** 2).sum(-1)
        return float(np.sqrt(d2.max()))

    def _boundary_tables(self):
        got = self._cache.get("arc")
        if got is None:
            V = self.vertex_array()
            E = np.roll(V, -1, axis=0) - V
            lengths = np.sqrt((E ** 2).sum(1))
            cum = np.concatenate([[0.0], np.cumsum(lengths)])
            with np.errstate(invalid="ignore"):
                unit = E / lengths[:, None]
            got = (cum, V, unit)
            self._cache["arc"] = got
        return got

    def boundary_points(self, s):
        """Map arc-length parameters (any shape) to boundary points, (..., dim)."""
        s = np.asarray(s, dtype=float)
        if self.kind == "ball":
            r = float(self.radius)
            theta = s / r
            return np.stack([r * np.cos(theta), r * np.sin(theta)], axis=-1)
        cum, V, unit = self._boundary_tables()
        total = cum[-1]
        sm = np.mod(s, total)
        idx = np.clip(np.searchsorted(cum, sm, side="right") - 1, 0, len(V) - 1)
        return V[idx] + (sm - cum[idx])[..., None] * unit[idx]

    def __repr__(self):
        if self.kind == "ball":
            return f"ConvexBody.ball(r={self.radius}, dim={self.dim})"
        return (f"ConvexBody(polytope dim={self.dim}, "
                f"{len(self.vertices)}V/{len(self.facets)}F"
                f"{', exact' if self.exact else ''})")


# ---------------------------------------------------------------------------
# operations

def gauge_norm(q, T):
    """Support-based norm of q: max over T of <p, q>.

    Positively homogeneous of degree 1 and possibly asymmetric.  The unit
    ball of this norm is the polar of T.
    """
    if T.kind == "ball":
        if len(q) != T.dim:
            raise DimensionMismatch("point/body dimensions differ")
        return float(T.radius) * norm2(q)
    if len(q) != T.dim:
        raise DimensionMismatch("point/body dimensions differ")
    return max(dot(v, q) for v in T.vertices)


def support(p, K):
    """Support value max over K of <p, q> and the maximizing face.

    For a polytope the face is the tuple of vertex indices attaining the
    maximum (singleton for a vertex); for a ball it is the tangency point.
    """
    if K.kind == "ball":
        r = float(K.radius)
        val = r * norm2(p)
        if val == 0:
            return 0.0, tuple(0.0 for _ in p)
        arg = vscale(r / norm2(p), tuple(float(c) for c in p))
        return val, arg
    if len(p) != K.dim:
        raise DimensionMismatch("direction/body dimensions differ")
    vals = [dot(p, v) for v in K.vertices]
    best = max(vals)
    tol = 0 if (K.exact and all_exact(p)) else EPS * max(1.0, K.scale()) * (
        1.0 + max(abs(float(c)) for c in p))
    face = tuple(i for i, v in enumerate(vals) if float(best - v) <= float(tol))
    return best, face


def polar(P):
    """Polar body: vertices become facets at offset 1 and vice versa."""
    if P.kind == "ball":
        one = 1.0
        return ConvexBody.ball(one / float(P.radius), P.dim)
    verts = [tuple(x / c for x in n) for n, c in P.facets]
    one = Fraction(1) if P.exact else 1.0
    facets = [(v, one) for v in P.vertices]
    return ConvexBody("polytope", P.dim, vertices=verts, facets=facets)


def reflect(K):
    """The reflection -K."""
    if K.kind == "ball":
        return K
    verts = [vneg(v) for v in K.vertices]
    facets = [(vneg(n), c) for n, c in K.facets]
    if K.dim == 2:
        return ConvexBody("polytope", 2, vertices=verts)
    return ConvexBody("polytope", K.dim, vertices=verts, facets=facets)


def minkowski_sum(K, L):
    """Minkowski sum of two polytopes (2D: angular edge merge, exact)."""
    if K.kind == "ball" or L.kind == "ball":
        raise InvalidBody("minkowski_sum is for polytopes")
    if K.dim != L.dim:
        raise DimensionMismatch("summands of different dimension")
    if len(K.vertices) == 1:
        return ConvexBody("polytope", L.dim,
                          vertices=[vadd(K.vertices[0], v) for v in L.vertices])
    if len(L.vertices) == 1:
        return ConvexBody("polytope", K.dim,
                          vertices=[vadd(v, L.vertices[0]) for v in K.vertices])
    if K.dim == 2:
        return _minkowski_sum_2d(K, L)
    if K.dim == 1:
        lo = K.vertices[0][0] + L.vertices[0][0]
        hi = K.vertices[-1][0] + L.vertices[-1][0]
        return ConvexBody.segment(lo, hi)
    if K.dim > 4:
        raise InvalidBody("minkowski_sum implemented for dim <= 4")
    sums = {vadd(a, b) for a in K.vertices for b in L.vertices}
    facets = _facets_from_vertices_nd(sorted(sums), K.dim)
    verts = _vertices_from_facets_nd(facets, K.dim)
    return ConvexBody("polytope", K.dim, vertices=verts, facets=facets)


def _bottom_most(verts):
    return min(range(len(verts)), key=lambda i: (verts[i][1], verts[i][0]))


def _minkowski_sum_2d(K, L):
    va, vb = list(K.vertices), list(L.vertices)
    ia, ib = _bottom_most(va), _bottom_most(vb)
    ea = [vsub(va[(ia + i + 1) % len(va)], va[(ia + i) % len(va)])
          for i in range(len(va))]
    eb = [vsub(vb[(ib + i + 1) % len(vb)], vb[(ib + i) % len(vb)])
          for i in range(len(vb))]
    edges = sorted(ea + eb, key=cmp_to_key(_angle_cmp))
    start = vadd(va[ia], vb[ib])
    pts = [start]
    cur = start
    for e in edges[:-1]:
        cur = vadd(cur, e)
        pts.append(cur)
    # collinear consecutive edges leave redundant points; the hull prunes them
    verts = convex_hull_2d(pts)
    return ConvexBody("polytope", 2, vertices=verts)


def central_symmetrize(K):
    """The difference body K - K (centrally symmetric about the origin)."""
    return minkowski_sum(K, reflect(K))


# ---------------------------------------------------------------------------
# width

def _difference_body(K):
    got = K._cache.get("diff") if K.kind == "polytope" else None
    if K.kind == "ball":
        return ConvexBody.ball(2 * float(K.radius), K.dim)
    if got is None:
        got = central_symmetrize(K)
        K._cache["diff"] = got
    return got


def _min_breadth_euclidean(M):
    """Minimum of the support function of a symmetric polygon over the unit circle.

    Attained in a facet-normal direction, so it is the smallest facet
    offset-to-normal ratio.
    """
    normals, offsets = M.facet_arrays()
    lens = np.sqrt((normals ** 2).sum(1))
    vals = offsets / lens
    j = int(np.argmin(vals))
    return float(vals[j]), tuple(normals[j] / lens[j])


def _min_support_on_segment(Vdiff, a, b):
    """Minimize max_v <p(s), v> for p(s) on segment [a, b]; returns (value, s*).

    The objective is a convex piecewise-linear function of s, so a ternary
    search converges globally.
    """
    A = Vdiff @ np.asarray(a, dtype=float)
    B = Vdiff @ (np.asarray(b, dtype=float) - np.asarray(a, dtype=float))

    def g(s):
        return float((A + s * B).max())

    lo, hi = 0.0, 1.0
    for _ in range(200):
        m1 = lo + (hi - lo) / 3
        m2 = hi - (hi - lo) / 3
        if g(m1) <= g(m2):
            hi = m2
        else:
            lo = m1
    s = 0.5 * (lo + hi)
    for cand in (0.0, s, 1.0):
        if g(cand) <= g(s):
            s = cand
    return g(s), s


def width(K, T):
    """Width of K in the geometry of T: min over p on the boundary of T of the
    breadth max<p,q> - min<p,q>.

    Returns (value, direction).  For a ball T this is the Euclidean width
    scaled by the radius; for a polytope T the minimum is taken edge by edge
    over the boundary.
    """
    M = _difference_body(K)
    if T.kind == "ball":
        if M.kind == "ball":
            # difference body of a ball is a ball; its support is constant
            return float(T.radius) * float(M.radius), (float(T.radius), 0.0)
        val, direction = _min_breadth_euclidean(M)
        r = float(T.radius)
        return r * val, vscale(r, direction)
    if T.dim != 2 or K.dim != 2:
        raise DimensionMismatch("polytope-geometry width implemented in 2D")
    Vdiff = M.vertex_array()
    best = None
    verts = T.vertices
    m = len(verts)
    for i in range(m):
        a, b = verts[i], verts[(i + 1) % m]
        val, s = _min_support_on_segment(Vdiff, a, b)
        if best is None or val < best[0]:
            af = np.asarray([float(c) for c in a])
            bf = np.asarray([float(c) for c in b])
            p = tuple((af + s * (bf - af)).tolist())
            best = (val, p)
    return best


# ---------------------------------------------------------------------------
# JSON body format

def _num_to_json(x):
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return int(x)
        return f"{x.numerator}/{x.denominator}"
    return x


def _num_from_json(x):
    if isinstance(x, str):
        num, _, den = x.partition("/")
        return Fraction(int(num), int(den)) if den else Fraction(x)
    return x


def body_to_json(K):
    """Serialize a body; polytopes carry both representations."""
    if K.kind == "ball":
        return {"kind": "ball", "radius": float(K.radius), "dim": K.dim}
    return {
        "kind": "polytope",
        "vertices": [[_num_to_json(c) for c in v] for v in K.vertices],
        "facets": [{"normal": [_num_to_json(c) for c in n],
                    "offset": _num_to_json(c0)} for n, c0 in K.facets],
    }


def body_from_json(obj, exact=None):
    """Build a body from its JSON form.

    Numbers may be ints, floats, or "p/q" strings; with ``exact=True`` every
    number is parsed as a Fraction (decimal floats included, exactly).
    """
    if isinstance(obj, str):
        obj = json.loads(obj)
    if obj.get("kind") == "ball":
        return ConvexBody.ball(obj["radius"], obj.get("dim", 2))

    def conv(x):
        x = _num_from_json(x)
        if exact and not isinstance(x, Fraction):
            x = Fraction(str(x))
        return x

    verts = [[conv(c) for c in v] for v in obj["vertices"]]
    facets = None
    if obj.get("facets"):
        facets = [([conv(c) for c in f["normal"]], conv(f["offset"]))
                  for f in obj["facets"]]
    dim = len(verts[0])
    if dim == 2:
        # resynthesize facets from the hull so minor format drift cannot
        # desynchronize the two representations
        return ConvexBody("polytope", 2, vertices=verts)
    return ConvexBody("polytope", dim, vertices=verts, facets=facets)
