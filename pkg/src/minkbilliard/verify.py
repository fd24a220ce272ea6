"""Named verification batteries over seeded random instances.

Each battery returns a deterministic, JSON-serializable report with one
entry per case and a top-level ``passed`` flag.  All randomness flows from
the single seed through a counter-based generator.
"""

import math

from .bodies import ConvexBody, central_symmetrize, minkowski_sum, width
from .hanner import HannerTree, verify_hanner
from .rand import RNG_NAME, make_rng, random_convex_polygon, random_nested_pair
from .shapes import equilateral_triangle, reuleaux
from .shortest import XiOptions, xi

__all__ = ["BATTERIES", "run_battery"]

SQRT3 = math.sqrt(3.0)


def _report(name, seed, samples, cases):
    failures = sum(0 if c["ok"] else 1 for c in cases)
    return {"battery": name, "seed": seed, "rng": RNG_NAME,
            "samples": samples, "cases": cases,
            "failures": failures, "passed": failures == 0}


def _scale_body(K, lam):
    return ConvexBody.polygon([(lam * float(x), lam * float(y))
                               for x, y in K.vertices])


def battery_monotonicity(seed=0, samples=50):
    """xi is monotone under inclusion of the table body."""
    rng = make_rng(seed)
    opts = XiOptions.battery(seed)
    cases = []
    for i in range(samples):
        K, L = random_nested_pair(rng)
        T = random_convex_polygon(rng)
        a = xi(K, T, opts).value
        b = xi(L, T, opts).value
        ok = a <= b * (1 + 2e-2)
        cases.append({"case": i, "xi_inner": a, "xi_outer": b, "ok": bool(ok)})
    return _report("monotonicity", seed, samples, cases)


def battery_symmetry(seed=0, samples=50):
    """xi is symmetric in the two bodies."""
    rng = make_rng(seed)
    opts = XiOptions.battery(seed)
    cases = []
    for i in range(samples):
        K = random_convex_polygon(rng)
        T = random_convex_polygon(rng)
        a = xi(K, T, opts).value
        b = xi(T, K, opts).value
        rel = abs(a - b) / max(a, b)
        cases.append({"case": i, "xi_KT": a, "xi_TK": b, "rel": rel,
                      "ok": bool(rel <= 2e-2)})
    return _report("symmetry", seed, samples, cases)


def battery_brunn_minkowski(seed=0, samples=50):
    """xi is superadditive under Minkowski sum of the table bodies."""
    rng = make_rng(seed)
    opts = XiOptions.battery(seed)
    cases = []
    for i in range(samples):
        K = random_convex_polygon(rng)
        L = random_convex_polygon(rng)
        T = random_convex_polygon(rng)
        s = xi(minkowski_sum(K, L), T, opts).value
        a = xi(K, T, opts).value
        b = xi(L, T, opts).value
        ok = s >= (a + b) * (1 - 2e-2)
        cases.append({"case": i, "xi_sum": s, "xi_K": a, "xi_L": b,
                      "ok": bool(ok)})
    return _report("brunn-minkowski", seed, samples, cases)


def battery_homogeneity(seed=0, samples=50):
    """xi scales linearly in either body (checked for factors 1/2 and 2)."""
    rng = make_rng(seed)
    opts = XiOptions.battery(seed)
    cases = []
    for i in range(samples):
        K = random_convex_polygon(rng)
        T = random_convex_polygon(rng)
        base = xi(K, T, opts).value
        ok = True
        worst = 0.0
        for lam in (0.5, 2.0):
            vK = xi(_scale_body(K, lam), T, opts).value
            vT = xi(K, _scale_body(T, lam), opts).value
            for v in (vK, vT):
                rel = abs(v - lam * base) / (lam * base)
                worst = max(worst, rel)
                ok = ok and rel <= 1e-6
        cases.append({"case": i, "xi": base, "worst_rel": worst,
                      "ok": bool(ok)})
    return _report("homogeneity", seed, samples, cases)


def battery_rogers_shepard_finsler(seed=0, samples=50):
    """xi of the difference body is at most (n+1) = 3 times xi of the body."""
    rng = make_rng(seed)
    opts = XiOptions.battery(seed)
    cases = []
    for i in range(samples):
        K = random_convex_polygon(rng)
        T = random_convex_polygon(rng)
        diff = xi(central_symmetrize(K), T, opts).value
        base = xi(K, T, opts).value
        ok = diff <= 3 * base * (1 + 2e-2)
        cases.append({"case": i, "xi_diff": diff, "xi": base,
                      "ratio": diff / base, "ok": bool(ok)})
    return _report("rogers-shepard-finsler", seed, samples, cases)


def battery_rogers_shepard_euclid(seed=0, samples=50):
    """Euclidean case: xi(K-K, B) = 4 w(K) and xi(K, B) >= sqrt(3) w(K);
    the equilateral triangle attains the ratio sqrt(3)."""
    rng = make_rng(seed)
    ball = ConvexBody.ball(1.0)
    cases = []
    eq = equilateral_triangle(1.0)
    weq = width(eq, ball)[0]
    veq = xi(eq, ball, XiOptions()).value
    ratio = veq / weq
    cases.append({"case": "equilateral", "ratio": ratio,
                  "equality": bool(abs(ratio - SQRT3) <= 1e-6),
                  "ok": bool(abs(ratio - SQRT3) <= 1e-6)})
    opts = XiOptions.battery(seed)
    for i in range(samples):
        K = random_convex_polygon(rng)
        w = width(K, ball)[0]
        vdiff = xi(central_symmetrize(K), ball, opts).value
        v = xi(K, ball, opts).value
        ok = (abs(vdiff - 4 * w) <= 1e-3 * 4 * w
              and v >= (SQRT3 - 1e-6) * w)
        cases.append({"case": i, "xi_diff": vdiff, "four_w": 4 * w,
                      "xi": v, "sqrt3_w": SQRT3 * w, "ok": bool(ok)})
    return _report("rogers-shepard-euclid", seed, samples, cases)


ACCEPTANCE_TREES = {
    "segment": HannerTree.leaf(),
    "square": HannerTree.sum_inf(HannerTree.leaf(), HannerTree.leaf()),
    "diamond": HannerTree.sum1(HannerTree.leaf(), HannerTree.leaf()),
    "cube": HannerTree.sum_inf(
        HannerTree.leaf(),
        HannerTree.sum_inf(HannerTree.leaf(), HannerTree.leaf())),
    "octahedron": HannerTree.sum1(
        HannerTree.leaf(),
        HannerTree.sum1(HannerTree.leaf(), HannerTree.leaf())),
    "prism-mixed": HannerTree.sum1(
        HannerTree.leaf(),
        HannerTree.sum_inf(HannerTree.leaf(), HannerTree.leaf())),
    "mixed-4d": HannerTree.sum1(
        HannerTree.sum_inf(HannerTree.leaf(), HannerTree.leaf()),
        HannerTree.sum_inf(HannerTree.leaf(), HannerTree.leaf())),
}


def battery_hanner(seed=0, samples=100):
    """Exact Hanner checks over the seven standard trees."""
    cases = []
    for i, (name, tree) in enumerate(ACCEPTANCE_TREES.items()):
        rep = verify_hanner(tree, samples=samples, seed=seed + i)
        cases.append({"case": name, "dim": rep.dim,
                      "closed": rep.closed, "length4": rep.length_exact,
                      "period2n": rep.period_exact,
                      "sym_q": rep.symmetric_q, "sym_p": rep.symmetric_p,
                      "rejected": rep.rejected_starts,
                      "nonclassical": rep.nonclassical,
                      "ok": bool(rep.all_ok)})
    return _report("hanner", seed, samples, cases)


def battery_constant_width(seed=0, samples=2):
    """Width-1 Reuleaux bodies: the minimizer is 2-periodic with value 2w."""
    ball = ConvexBody.ball(1.0)
    opts = XiOptions(starts=16, tol_frac=1e-7, max_polls=1500, seed=seed)
    cases = []
    for k in (3, 5)[:max(1, samples)]:
        R = reuleaux(k, 64)
        w = width(R, ball)[0]
        res = xi(R, ball, opts)
        ok = res.m == 2 and 2 * w - 0.01 <= res.value <= 2 * w + 1e-9
        cases.append({"case": f"reuleaux-{k}", "width": w, "xi": res.value,
                      "m": res.m, "ok": bool(ok)})
    return _report("constant-width", seed, samples, cases)


BATTERIES = {
    "monotonicity": battery_monotonicity,
    "symmetry": battery_symmetry,
    "brunn-minkowski": battery_brunn_minkowski,
    "homogeneity": battery_homogeneity,
    "rogers-shepard-finsler": battery_rogers_shepard_finsler,
    "rogers-shepard-euclid": battery_rogers_shepard_euclid,
    "hanner": battery_hanner,
    "constant-width": battery_constant_width,
}


def run_battery(name, seed=0, samples=None):
    if name not in BATTERIES:
        raise KeyError(f"unknown battery {name!r}")
    fn = BATTERIES[name]
    if samples is None:
        return fn(seed=seed)
    return fn(seed=seed, samples=samples)
