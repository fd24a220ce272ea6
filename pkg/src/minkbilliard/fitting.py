"""Minimal-scale fitting: place a point set into a smallest homothet of a body.

``fit_scale(points, K)`` solves the linear program

    min alpha  s.t.  <n_j, q_i + t> <= alpha * c_j   for all points i, facets j

over (alpha, t).  The inner maximum over points collapses the constraints to
one per facet, so with u_j = n_j / c_j and s_j = max_i <u_j, q_i> the program
is ``min_t max_j (s_j + <u_j, t>)``.  A point set fits into the open interior
of K + t exactly when alpha* < 1.

The tiny LP is solved by deterministic exhaustive enumeration of constraint
bases with lexicographic tie-breaking; bodies with too many facets for that
fall back to a deterministic simplex solve (scipy HiGHS).  The batch helpers
used by the trajectory optimizer evaluate alpha* via the enumerated dual
vertices, which for two-point sets reduces to the gauge of the difference
body.
"""

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .bodies import ConvexBody, _difference_body
from .errors import DimensionMismatch, InvalidBody
from .numeric import EPS

__all__ = ["FitResult", "fit_scale", "fit_alpha_batch"]

# combinations(f, n+1) beyond this and we hand the LP to HiGHS instead
_ENUM_LIMIT = 20000


@dataclass
class FitResult:
    alpha_star: float
    translation: tuple
    active_constraints: frozenset = field(default_factory=frozenset)
    degenerate: bool = False

    @property
    def fits_interior(self):
        return self.alpha_star < 1.0 - EPS


# ---------------------------------------------------------------------------
# per-body solver caches

class _PolytopeFit:
    def __init__(self, K):
        normals, offsets = K.facet_arrays()
        self.K = K
        self.dim = K.dim
        self.U = normals / offsets[:, None]
        self.f = len(offsets)
        self.nb = self.dim + 1
        self.enumerable = math.comb(self.f, self.nb) <= _ENUM_LIMIT
        self._primal = None
        self._dual = None

    def primal_bases(self):
        if self._primal is None:
            idx = np.array(list(itertools.combinations(range(self.f), self.nb)))
            mats = np.concatenate(
                [self.U[idx], -np.ones((len(idx), self.nb, 1))], axis=2)
            dets = np.linalg.det(mats)
            ok = np.abs(dets) > 1e-12 * np.abs(mats).max()
            inv = np.zeros_like(mats)
            inv[ok] = np.linalg.inv(mats[ok])
            self._primal = (idx, inv, ok)
        return self._primal

    def dual_vertices(self):
        """Rows y >= 0 with sum 1 and U^T y = 0; alpha* = max_y <s, y>."""
        if self._dual is None:
            if self.dim != 2:
                raise DimensionMismatch("dual enumeration is 2D only")
            rows = []
            U = self.U
            lens = np.sqrt((U ** 2).sum(1))
            for a, b in itertools.combinations(range(self.f), 2):
                cross = U[a, 0] * U[b, 1] - U[a, 1] * U[b, 0]
                if abs(cross) <= 1e-12 * lens[a] * lens[b] and U[a] @ U[b] < 0:
                    k = lens[b] / lens[a]
                    y = np.zeros(self.f)
                    y[a], y[b] = k / (1 + k), 1 / (1 + k)
                    rows.append(y)
            for combo in itertools.combinations(range(self.f), 3):
                A = np.vstack([U[list(combo)].T, np.ones(3)])
                try:
                    y3 = np.linalg.solve(A, np.array([0.0, 0.0, 1.0]))
                except np.linalg.LinAlgError:
                    continue
                if (y3 >= -1e-12).all():
                    y = np.zeros(self.f)
                    y[list(combo)] = np.clip(y3, 0.0, None)
                    rows.append(y)
            if not rows:
                raise InvalidBody("facet normals do not positively span")
            self._dual = np.array(rows)
        return self._dual


def _fit_cache(K):
    got = K._cache.get("fit")
    if got is None:
        got = _PolytopeFit(K)
        K._cache["fit"] = got
    return got


# ---------------------------------------------------------------------------
# smallest enclosing disk (ball bodies)

def _enclosing_disk(points):
    pts = [np.asarray([float(c) for c in p]) for p in points]
    if len(pts) == 1:
        return pts[0], 0.0, (0,)
    best = None
    for i, j in itertools.combinations(range(len(pts)), 2):
        c = 0.5 * (pts[i] + pts[j])
        r = 0.5 * np.linalg.norm(pts[i] - pts[j])
        if all(np.linalg.norm(p - c) <= r + 1e-12 * (1 + r) for p in pts):
            if best is None or r < best[1]:
                best = (c, r, (i, j))
    if best is not None:
        return best
    for i, j, k in itertools.combinations(range(len(pts)), 3):
        a, b, d = pts[i], pts[j], pts[k]
        m = 2 * np.array([b - a, d - a])
        rhs = np.array([b @ b - a @ a, d @ d - a @ a])
        det = np.linalg.det(m)
        if abs(det) < 1e-14:
            continue
        c = np.linalg.solve(m, rhs)
        r = np.linalg.norm(a - c)
        if all(np.linalg.norm(p - c) <= r + 1e-12 * (1 + r) for p in pts):
            if best is None or r < best[1]:
                best = (c, r, (i, j, k))
    if best is None:
        raise InvalidBody("enclosing disk search failed")
    return best


# ---------------------------------------------------------------------------

def fit_scale(points, K):
    """Minimal alpha and translation t with every point inside alpha*K + t.

    Deterministic: ties between optimal bases are broken by lexicographic
    basis order, and a tie with materially different translations is flagged
    as degenerate.
    """
    points = [tuple(p) for p in points]
    if not points:
        raise InvalidBody("need at least one point")
    if any(len(p) != K.dim for p in points):
        raise DimensionMismatch("point/body dimensions differ")

    if K.kind == "ball":
        center, radius, supp = _enclosing_disk(points)
        alpha = radius / float(K.radius)
        active = frozenset((i, -1) for i in supp)
        return FitResult(alpha, tuple((-center).tolist()), active,
                         degenerate=False)

    fit = _fit_cache(K)
    P = np.array([[float(c) for c in p] for p in points])
    vals = P @ fit.U.T                     # (m, f)
    s = vals.max(axis=0)                   # (f,)
    scale = max(1.0, float(np.abs(vals).max()))
    tol = EPS * scale

    if fit.enumerable:
        idx, inv, ok = fit.primal_bases()
        rhs = -s[idx]                      # (C, nb)
        sols = np.einsum("cij,cj->ci", inv, rhs)    # (t..., alpha)
        t_part, alpha_part = sols[:, :-1], sols[:, -1]
        feas = (t_part @ fit.U.T + s[None, :] <= alpha_part[:, None] + tol)
        feas &= ok[:, None]
        feasible = feas.all(axis=1) & ok
        if not feasible.any():
            raise InvalidBody("no feasible basis; body unbounded or invalid")
        alphas = np.where(feasible, alpha_part, np.inf)
        best = float(alphas.min())
        near = np.flatnonzero(alphas <= best + tol)
        chosen = int(near[0])              # combinations() is lexicographic
        t = t_part[chosen]
        degenerate = bool(
            len(near) > 1
            and np.abs(t_part[near] - t).max() > 1e-7 * max(1.0, scale))
        alpha = float(alpha_part[chosen])
    else:
        from scipy.optimize import linprog
        A = np.concatenate([fit.U, -np.ones((fit.f, 1))], axis=1)
        res = linprog(c=[0.0] * K.dim + [1.0], A_ub=A, b_ub=-s,
                      bounds=[(None, None)] * (K.dim + 1), method="highs")
        if not res.success:
            raise InvalidBody(f"LP solve failed: {res.message}")
        t, alpha = res.x[:-1], float(res.x[-1])
        resid = fit.U @ t + s - alpha
        tight = np.abs(resid) <= 10 * tol
        rows = np.concatenate([fit.U[tight], -np.ones((int(tight.sum()), 1))],
                              axis=1)
        degenerate = np.linalg.matrix_rank(rows, tol=1e-9) < K.dim + 1

    active = set()
    for j in range(fit.f):
        if abs(float(fit.U[j] @ t) + s[j] - alpha) <= 10 * tol:
            for i in range(len(points)):
                if abs(vals[i, j] + float(fit.U[j] @ t) - alpha) <= 10 * tol:
                    active.add((i, j))
    return FitResult(alpha, tuple(t.tolist()), frozenset(active), degenerate)


# ---------------------------------------------------------------------------
# batch evaluation for the optimizer / oracle

def fit_alpha_batch(K, Q):
    """alpha* for a batch of configurations Q with shape (B, m, dim)."""
    Q = np.asarray(Q, dtype=float)
    B, m, dim = Q.shape
    if K.kind == "ball":
        return _alpha_batch_ball(K, Q)
    if dim != K.dim:
        raise DimensionMismatch("batch/body dimensions differ")
    if m == 2 and K.dim == 2:
        diff = _difference_body(K)
        normals, offsets = diff.facet_arrays()
        U2 = normals / offsets[:, None]
        d = Q[:, 1, :] - Q[:, 0, :]
        return (d @ U2.T).max(axis=1)
    fit = _fit_cache(K)
    s = np.einsum("bmk,fk->bmf", Q, fit.U).max(axis=1)   # (B, f)
    if fit.enumerable:
        Y = fit.dual_vertices()
        out = np.empty(B)
        step = max(1, int(4e6 // max(1, Y.shape[0])))
        for lo in range(0, B, step):
            out[lo:lo + step] = (s[lo:lo + step] @ Y.T).max(axis=1)
        return out
    from scipy.optimize import linprog
    A = np.concatenate([fit.U, -np.ones((fit.f, 1))], axis=1)
    bounds = [(None, None)] * (K.dim + 1)
    c = [0.0] * K.dim + [1.0]
    out = np.empty(B)
    for b in range(B):
        res = linprog(c=c, A_ub=A, b_ub=-s[b], bounds=bounds, method="highs")
        out[b] = res.x[-1] if res.success else np.inf
    return out


def _alpha_batch_ball(K, Q):
    r = float(K.radius)
    m = Q.shape[1]
    if m == 1:
        return np.zeros(len(Q))
    if m == 2:
        return 0.5 * np.linalg.norm(Q[:, 1] - Q[:, 0], axis=1) / r
    if m != 3:
        return np.array([_enclosing_disk(list(q))[1] / r for q in Q])
    a = Q[:, 0], Q[:, 1], Q[:, 2]
    sides = np.stack([
        np.linalg.norm(a[1] - a[2], axis=1),
        np.linalg.norm(a[0] - a[2], axis=1),
        np.linalg.norm(a[0] - a[1], axis=1),
    ], axis=1)
    s2 = sides ** 2
    longest = sides.max(axis=1)
    obtuse = 2 * s2.max(axis=1) >= s2.sum(axis=1)
    cross = np.cross(a[1] - a[0], a[2] - a[0])
    area = 0.5 * np.abs(cross)
    with np.errstate(divide="ignore", invalid="ignore"):
        circum = sides.prod(axis=1) / (4 * area)
    rad = np.where(obtuse, 0.5 * longest, circum)
    return rad / r
