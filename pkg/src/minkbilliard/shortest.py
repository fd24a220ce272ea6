"""Shortest closed polylines that do not fit into a planar body's interior.

The quantity computed here is the minimum, over closed polylines with m = 2
or 3 nodes that cannot be translated into the open interior of K, of the
polyline length measured by gauge_norm(., T).  By the translation argument
the search is restricted to nodes on the boundary of K, parametrized by arc
length; candidates are scored with an exact penalty on the fit scale and
refined by a multistart coordinate pattern search.  A brute-force grid
oracle over the same space provides independent verification.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from .bodies import gauge_norm, width
from .errors import DimensionMismatch
from .fitting import fit_alpha_batch, fit_scale

__all__ = ["XiOptions", "PolyLine", "XiResult", "shortest_nonfit", "xi",
           "xi_oracle", "polyline_length"]


@dataclass(frozen=True)
class XiOptions:
    """Search options (a plain record: starts, step, penalty, seed)."""
    starts: int = 64
    init_step_frac: float = 1.0 / 16.0
    shrink: float = 0.5
    tol_frac: float = 1e-9
    penalty_factor: float = 1e3
    seed: int = 0
    max_polls: int = 6000
    polish: bool = True
    cross_check: bool = False

    @classmethod
    def battery(cls, seed=0):
        """Lighter budget for statistical batteries with loose tolerances."""
        return cls(starts=20, tol_frac=1e-6, max_polls=1200, seed=seed)


@dataclass(frozen=True)
class PolyLine:
    """Closed polyline with its length under the reference geometry."""
    points: tuple
    length: float

    @property
    def m(self):
        return len(self.points)


@dataclass(frozen=True)
class XiResult:
    value: float
    minimizer: PolyLine
    m: int
    alpha_at_min: float
    method: str
    converged: bool = True


def polyline_length(points, T):
    """Sum of gauge_norm(q_{i+1} - q_i, T) around the closed polyline."""
    total = 0
    m = len(points)
    for i in range(m):
        d = tuple(a - b for a, b in zip(points[(i + 1) % m], points[i]))
        total += gauge_norm(d, T)
    return total


# ---------------------------------------------------------------------------
# batched evaluation

def _lengths_batch(Q, T):
    D = np.roll(Q, -1, axis=1) - Q
    if T.kind == "ball":
        return float(T.radius) * np.linalg.norm(D, axis=2).sum(axis=1)
    Vt = T.vertex_array()
    return np.einsum("bmk,vk->bmv", D, Vt).max(axis=2).sum(axis=1)


def _objective_batch(K, T, S, penalty):
    Q = K.boundary_points(S)
    lengths = _lengths_batch(Q, T)
    alphas = fit_alpha_batch(K, Q)
    return lengths + penalty * np.clip(1.0 - alphas, 0.0, None)


def _kronecker_starts(n, d, seed):
    phi = 2.0
    for _ in range(64):
        phi = (1.0 + phi) ** (1.0 / (d + 1))
    alpha = np.array([phi ** -(k + 1) for k in range(d)])
    i = np.arange(1, n + 1, dtype=float)[:, None] + 0.5 + (seed % 997)
    return np.mod(i * alpha[None, :], 1.0)


def _pattern_search(K, T, S, steps, penalty, tol, shrink, max_polls):
    """Coordinate pattern search with shrinking per-start steps.

    Poll set: +-e_i plus the two all-ones diagonals (the latter walk the
    flat valley created by re-anchoring the polyline along the boundary).
    """
    B, m = S.shape
    P = K.perimeter()
    dirs = np.concatenate([np.eye(m), -np.eye(m),
                           np.ones((1, m)), -np.ones((1, m))])
    obj = _objective_batch(K, T, S, penalty)
    polls = 0
    level_cap = 30  # improving polls allowed per step level before a forced shrink
    level_polls = np.zeros(B, dtype=int)
    active = steps >= tol
    while active.any() and polls < max_polls:
        polls += 1
        cand = np.mod(S[:, None, :] + steps[:, None, None] * dirs[None], P)
        flat = cand.reshape(-1, m)
        vals = _objective_batch(K, T, flat, penalty).reshape(B, len(dirs))
        best_idx = vals.argmin(axis=1)
        best_val = vals[np.arange(B), best_idx]
        # sufficient decrease ~ step^2 keeps micro-improvements from stalling
        # the shrink schedule; a premature shrink only costs extra levels
        rho = 1e-6 * steps * steps / P + 1e-14 * (1 + np.abs(obj))
        improved = active & (best_val < obj - rho) & (level_polls < level_cap)
        S[improved] = cand[improved, best_idx[improved]]
        obj[improved] = best_val[improved]
        level_polls[improved] += 1
        shrunk = active & ~improved
        steps[shrunk] *= shrink
        level_polls[shrunk] = 0
        active = steps >= tol
    return S, obj, polls


def shortest_nonfit(m, K, T, opts=None):
    """Shortest closed m-gon (m in {2, 3}) not fitting into the interior of K.

    Nodes are parametrized by boundary arc length of K; the fit constraint is
    handled by an exact penalty on 1 - alpha*.  The best configuration is
    normalized by its fit scale before reporting so the returned polyline is
    critical (alpha* = 1) regardless of the last search step.
    """
    if m not in (2, 3):
        raise ValueError("m must be 2 or 3")
    if K.dim != 2:
        raise DimensionMismatch("planar search only")
    opts = opts or XiOptions()
    P = K.perimeter()
    penalty = opts.penalty_factor * K.diameter()
    tol = opts.tol_frac * P

    # multistart phase runs coarse; the single-start polish descends to tol
    coarse_tol = max(tol, 1e-5 * P) if opts.polish else tol
    S = _kronecker_starts(opts.starts, m, opts.seed) * P
    steps = np.full(opts.starts, opts.init_step_frac * P)
    S, obj, polls = _pattern_search(K, T, S, steps, penalty, coarse_tol,
                                    opts.shrink, opts.max_polls)
    converged = polls < opts.max_polls

    best = int(obj.argmin())
    S_best = S[best:best + 1].copy()
    if opts.polish:
        steps2 = np.full(1, P / 64.0)
        S_best, obj2, polls2 = _pattern_search(
            K, T, S_best, steps2, penalty, tol, opts.shrink, opts.max_polls)
        converged = converged and polls2 < opts.max_polls

    Q = K.boundary_points(S_best)[0]
    alpha = float(fit_alpha_batch(K, Q[None])[0])
    if alpha <= 1e-12:
        raise ArithmeticError("search collapsed to a single point")
    pts = tuple(tuple(c / alpha for c in q) for q in Q)
    refit = fit_scale(pts, K)
    value = float(polyline_length(pts, T))
    return XiResult(value=value,
                    minimizer=PolyLine(points=pts, length=value),
                    m=m, alpha_at_min=refit.alpha_star,
                    method="optimizer", converged=converged)


def _symmetric_euclid_closed_form(K, T):
    w, direction = width(K, T)
    r = float(T.radius)
    c = w / r
    n = np.asarray(direction) / np.linalg.norm(direction)
    d = 0.5 * c * n
    pts = (tuple(-d), tuple(d))
    value = 2.0 * w
    return XiResult(value=value, minimizer=PolyLine(points=pts, length=value),
                    m=2, alpha_at_min=fit_scale(pts, K).alpha_star,
                    method="closed-form")


def xi(K, T, opts=None):
    """Length of the shortest closed billiard trajectory of K in geometry T.

    Minimum of shortest_nonfit over m in {2, 3}; ties within 1e-9 report
    m = 2.  When T is a Euclidean ball and K is centrally symmetric the
    doubled-width closed form is used (optionally cross-checked against the
    optimizer).
    """
    opts = opts or XiOptions()
    if T.kind == "ball" and K.is_centrally_symmetric():
        res = _symmetric_euclid_closed_form(K, T)
        if opts.cross_check:
            opt2 = shortest_nonfit(2, K, T, opts)
            rel = abs(opt2.value - res.value) / max(res.value, 1e-30)
            if rel > 1e-3:
                raise ArithmeticError(
                    f"closed form {res.value} disagrees with optimizer "
                    f"{opt2.value}")
        return res
    r2 = shortest_nonfit(2, K, T, opts)
    r3 = shortest_nonfit(3, K, T, opts)
    if r2.value <= r3.value + 1e-9:
        return r2
    return r3


def xi_oracle(K, T, grid=60):
    """Brute-force upper bound by grid search over boundary configurations.

    Every pair and triple of grid points is scored by length normalized by
    its fit scale (the normalized configuration does not fit), so the result
    decreases toward the true minimum as the grid refines, with O(P/grid)
    discretization error.
    """
    if K.dim != 2:
        raise DimensionMismatch("planar oracle only")
    if grid > 96:
        raise ValueError("grid must be at most 96")
    P = K.perimeter()
    pts = K.boundary_points(P * np.arange(grid) / grid)
    best = math.inf
    ii, jj = np.triu_indices(grid, k=1)
    pairs = np.stack([pts[ii], pts[jj]], axis=1)
    best = min(best, _oracle_scan(K, T, pairs))
    tri = np.array(
        [(i, j, k) for i in range(grid) for j in range(i + 1, grid)
         for k in range(j + 1, grid)], dtype=int)
    for lo in range(0, len(tri), 40000):
        chunk = pts[tri[lo:lo + 40000]]
        best = min(best, _oracle_scan(K, T, chunk))
    return best


def _oracle_scan(K, T, Q):
    lengths = _lengths_batch(Q, T)
    alphas = fit_alpha_batch(K, Q)
    ok = alphas > 1e-9
    if not ok.any():
        return math.inf
    return float((lengths[ok] / alphas[ok]).min())
