"""Seeded randomness: one 64-bit seed, counter-based generator throughout."""

from fractions import Fraction

import numpy as np

from .bodies import ConvexBody

RNG_NAME = "philox4x64"


def make_rng(seed):
    return np.random.Generator(np.random.Philox(int(seed) & (2 ** 64 - 1)))


def random_rational(rng, den=2 ** 16):
    """Uniform rational in (0, 1) with fixed denominator (exact mode friendly)."""
    return Fraction(int(rng.integers(1, den)), den)


def random_convex_polygon(rng, k_min=5, k_max=9, r_min=0.5, r_max=1.5):
    """Random convex polygon with the origin strictly interior.

    Angles are resampled until no gap reaches pi, which keeps the origin
    inside the hull of the sampled rays.
    """
    k = int(rng.integers(k_min, k_max + 1))
    while True:
        ang = np.sort(rng.uniform(0.0, 2 * np.pi, k))
        gaps = np.diff(np.concatenate([ang, [ang[0] + 2 * np.pi]]))
        if gaps.max() < 0.9 * np.pi:
            break
    rad = rng.uniform(r_min, r_max, k)
    pts = np.stack([rad * np.cos(ang), rad * np.sin(ang)], axis=1)
    body = ConvexBody.polygon([tuple(p) for p in pts])
    return body


def random_nested_pair(rng):
    """(K, L) with K inside L, both containing the origin strictly."""
    from .errors import InvalidBody
    L = random_convex_polygon(rng)
    for _ in range(50):
        lam = float(rng.uniform(0.35, 0.85))
        v = L.vertices[int(rng.integers(0, len(L.vertices)))]
        mu = float(rng.uniform(0.0, 0.8))
        t = (mu * (1 - lam) * float(v[0]), mu * (1 - lam) * float(v[1]))
        verts = [(lam * float(x) + t[0], lam * float(y) + t[1])
                 for x, y in L.vertices]
        try:
            K = ConvexBody.polygon(verts)  # raises if origin is not interior
        except InvalidBody:
            continue
        if all(L.contains(w) for w in K.vertices):
            return K, L
    raise RuntimeError("could not build a nested pair")
