"""Hanner polytopes: construction, trajectory statistics, and composition.

A Hanner polytope is built from segments [-1, 1] by alternating l1 sums
(convex hull of the two bodies placed in complementary coordinate blocks)
and l-infinity sums (products).  Realizing a tree produces the body together
with its polar, built in lockstep so that both representations stay exact
and every facet knows its block structure:

* facets of an l-infinity sum are a child facet times the other body;
* facets of an l1 sum are joins of one facet from each child.

Simple classical trajectories in such a body with geometry given by its
polar close after 2n bounces with length exactly 4 and are centrally
symmetric; ``verify_hanner`` samples random admissible starts and checks all
of that in rational arithmetic.  ``compose_trajectory`` builds the product
trajectory from two child trajectories and a mixing parameter pair (alpha,
beta), where finitely many beta are forbidden because both momentum
projections would reach polyline nodes simultaneously.
"""

import json
from dataclasses import dataclass
from fractions import Fraction

from .bodies import ConvexBody, gauge_norm
from .dynamics import (PhasePoint, momentum_length, phase_point_at,
                       random_phase_point, simulate)
from .errors import Degenerate, NonClassical, NotClosed, ProjectionMismatch
from .numeric import vsub

__all__ = ["HannerTree", "HannerPair", "realize", "forbidden_betas",
           "compose_trajectory", "verify_hanner", "HannerReport"]


@dataclass(frozen=True)
class HannerTree:
    op: str                    # "leaf" | "sum1" | "sumInf"
    left: object = None
    right: object = None

    @property
    def dim(self):
        if self.op == "leaf":
            return 1
        return self.left.dim + self.right.dim

    @classmethod
    def leaf(cls):
        return cls("leaf")

    @classmethod
    def sum1(cls, left, right):
        return cls("sum1", left, right)

    @classmethod
    def sum_inf(cls, left, right):
        return cls("sumInf", left, right)

    def swap(self):
        """Dual tree: exchanging the two sum kinds realizes the polar."""
        if self.op == "leaf":
            return self
        other = "sumInf" if self.op == "sum1" else "sum1"
        return HannerTree(other, self.left.swap(), self.right.swap())

    def to_json(self):
        if self.op == "leaf":
            return {"op": "leaf"}
        return {"op": self.op, "l": self.left.to_json(),
                "r": self.right.to_json()}

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, str):
            obj = json.loads(obj)
        if obj["op"] == "leaf":
            return cls.leaf()
        if obj["op"] not in ("sum1", "sumInf"):
            raise ValueError(f"unknown tree op {obj['op']!r}")
        return cls(obj["op"], cls.from_json(obj["l"]), cls.from_json(obj["r"]))


@dataclass
class HannerPair:
    tree: HannerTree
    H: ConvexBody
    H_polar: ConvexBody
    facet_tags: tuple          # tags for H's facets
    polar_facet_tags: tuple    # tags for H_polar's facets
    split: tuple = None        # (k, l) coordinate split at the root
    children: tuple = None     # (left HannerPair, right HannerPair)


def _pad(v, before, after, zero):
    return tuple([zero] * before + list(v) + [zero] * after)


def _product_body(A, B):
    """A x B with facets inherited blockwise (the l-infinity sum)."""
    k, l = A.dim, B.dim
    zero = Fraction(0)
    verts = [tuple(va) + tuple(vb) for va in A.vertices for vb in B.vertices]
    facets = [(_pad(n, 0, l, zero), c) for n, c in A.facets]
    facets += [(_pad(n, k, 0, zero), c) for n, c in B.facets]
    tags = [("left", a) for a in range(len(A.facets))]
    tags += [("right", b) for b in range(len(B.facets))]
    body = ConvexBody("polytope", k + l, vertices=verts, facets=facets,
                      validate=False)
    return body, tuple(tags)


def _join_body(A, B):
    """conv(A x 0 union 0 x B) with one facet per child facet pair (the l1 sum)."""
    k, l = A.dim, B.dim
    zero = Fraction(0)
    verts = [_pad(v, 0, l, zero) for v in A.vertices]
    verts += [_pad(v, k, 0, zero) for v in B.vertices]
    facets = []
    tags = []
    for a, (na, ca) in enumerate(A.facets):
        for b, (nb, cb) in enumerate(B.facets):
            n = tuple(x / ca for x in na) + tuple(x / cb for x in nb)
            facets.append((n, Fraction(1)))
            tags.append(("mixed", a, b))
    body = ConvexBody("polytope", k + l, vertices=verts, facets=facets,
                      validate=False)
    return body, tuple(tags)


def realize(tree):
    """Build (H, H_polar) for a tree, exactly, with facet block tags."""
    if tree.op == "leaf":
        seg = ConvexBody.segment(Fraction(-1), Fraction(1))
        tags = (("self", 0), ("self", 1))
        return HannerPair(tree, seg, ConvexBody.segment(Fraction(-1),
                                                        Fraction(1)),
                          tags, tags, split=None, children=None)
    lp = realize(tree.left)
    rp = realize(tree.right)
    if tree.op == "sum1":
        H, tags = _join_body(lp.H, rp.H)
        Hp, ptags = _product_body(lp.H_polar, rp.H_polar)
    else:
        H, tags = _product_body(lp.H, rp.H)
        Hp, ptags = _join_body(lp.H_polar, rp.H_polar)
    return HannerPair(tree, H, Hp, tags, ptags,
                      split=(tree.left.dim, tree.right.dim),
                      children=(lp, rp))


# ---------------------------------------------------------------------------
# composition

def momentum_node_times(record, K):
    """Cumulative arc length along the momentum polyline, measured with unit
    ball the polar of K; times[0] = 0 and times[-1] is the total length."""
    ps = record.momenta()
    times = [Fraction(0) if record.exact else 0.0]
    for i in range(len(ps)):
        step = gauge_norm(vsub(ps[(i + 1) % len(ps)], ps[i]), K)
        times.append(times[-1] + step)
    return times


def forbidden_betas(rec1, rec2, K, L):
    """Mixing parameters beta in (0, 1) for which both momentum projections
    of the composed trajectory would reach nodes at the same arc time.

    The first projection starts a fraction (1 - beta) of the way along the
    first jump of rec1's momentum polyline; the second starts at a node of
    rec2's.  Each coincidence equation contributes at most one beta, so the
    set is finite.
    """
    t1 = momentum_node_times(rec1, K)
    t2 = momentum_node_times(rec2, L)
    total = t1[-1]
    if t2[-1] != total:
        raise ProjectionMismatch("momentum polylines of different total length")
    d1 = t1[1] - t1[0]
    out = set()
    for i in range(1, len(t2) - 1):
        for j in range(len(t1) - 1):
            x = (t1[j] - t2[i]) % total
            if 0 < x < d1:
                out.add(1 - x / d1)
    return sorted(out)


def _project(v, lo, hi):
    return tuple(v[lo:hi])


def _contract_cyclic(points):
    """Drop consecutive duplicates around a closed node list."""
    out = []
    for p in points:
        if not out or p != out[-1]:
            out.append(p)
    while len(out) > 1 and out[0] == out[-1]:
        out.pop()
    return out


def _cyclic_match(nodes, targets):
    """Find (shift, translation) with nodes[i] = targets[(i+shift) % n] + tr."""
    n = len(targets)
    if len(nodes) != n:
        return None
    for shift in range(n):
        tr = vsub(nodes[0], targets[shift])
        if all(nodes[i] == tuple(a + b for a, b in
                                 zip(targets[(i + shift) % n], tr))
               for i in range(n)):
            return shift, tr
    return None


def _on_segment(x, a, b):
    """x strictly inside segment [a, b] (exact arithmetic)."""
    d = vsub(b, a)
    e = vsub(x, a)
    # collinearity: e = t d for a single t in (0, 1)
    t = None
    for dc, ec in zip(d, e):
        if dc != 0:
            t = ec / dc
            break
    if t is None:
        return False
    if not (0 < t < 1):
        return False
    return all(ec == t * dc for dc, ec in zip(d, e))


def compose_trajectory(rec1, rec2, alpha, beta, pair, max_bounces=None):
    """Extend the product start built from two child trajectories.

    ``pair`` must realize an l1-sum tree; rec1/rec2 are simple closed
    trajectories in the child configurations.  The start is

        q = (alpha * q1_1, (1-alpha) * q2_1)
        p = (beta * p1_1 + (1-beta) * p1_2, p2_1)

    and the result is simulated exactly, then checked: per-bounce block
    gauges stay alpha and 1-alpha, the contracted coordinate projections are
    congruent to the scaled child polylines (cyclic shift + translation,
    both reported), and the momentum projections traverse exactly the child
    momentum polylines.  Returns (record, report).
    """
    if pair.tree.op != "sum1":
        raise ProjectionMismatch("composition needs an l1-sum root")
    k, l = pair.split
    lp, rp = pair.children
    alpha = Fraction(alpha)
    beta = Fraction(beta)
    if not (0 < alpha < 1 and 0 < beta < 1):
        raise ValueError("alpha and beta must lie in (0, 1)")
    if beta in set(forbidden_betas(rec1, rec2, lp.H, rp.H)):
        raise Degenerate("beta is forbidden for this trajectory pair")

    q11 = rec1.bounces[0].q
    q21 = rec2.bounces[0].q
    p11 = rec1.bounces[0].p
    p12 = rec1.bounces[1].p
    p21 = rec2.bounces[0].p
    q = tuple(alpha * c for c in q11) + tuple((1 - alpha) * c for c in q21)
    p = tuple(beta * a + (1 - beta) * b for a, b in zip(p11, p12)) + tuple(p21)
    start = phase_point_at(q, p, pair.H, pair.H_polar)
    record = simulate(start, pair.H, pair.H_polar, max_bounces=max_bounces)

    report = _check_composition(record, rec1, rec2, alpha, pair)
    return record, report


def _check_composition(record, rec1, rec2, alpha, pair):
    k, l = pair.split
    lp, rp = pair.children
    qs = record.coordinates()
    ps = record.momenta()

    for q in qs:
        if gauge_norm(_project(q, 0, k), lp.H_polar) != alpha:
            raise ProjectionMismatch("first block gauge drifted from alpha")
        if gauge_norm(_project(q, k, k + l), rp.H_polar) != 1 - alpha:
            raise ProjectionMismatch("second block gauge drifted from 1-alpha")

    report = {}
    for name, lo, hi, rec, scale, child in (
            ("first", 0, k, rec1, alpha, lp),
            ("second", k, k + l, rec2, 1 - alpha, rp)):
        nodes = _contract_cyclic([_project(q, lo, hi) for q in qs])
        targets = [tuple(scale * c for c in q) for q in rec.coordinates()]
        match = _cyclic_match(nodes, targets)
        if match is None:
            raise ProjectionMismatch(
                f"{name} coordinate projection is not congruent to the "
                f"scaled child polyline")
        report[f"{name}_shift"], report[f"{name}_translation"] = match

    # momentum projections: same-type momenta hit the child nodes in cyclic
    # order, the other type stays strictly inside the current segment
    for name, lo, hi, rec, child, want in (
            ("first", 0, k, rec1, lp, "left"),
            ("second", k, k + l, rec2, rp, "right")):
        proj = [_project(p, lo, hi) for p in ps]
        types = [pair.polar_facet_tags[b.p_facet][0] for b in record.bounces]
        node_idx = [i for i, t in enumerate(types) if t == want]
        target = rec.momenta()
        if len(node_idx) != len(target):
            raise ProjectionMismatch(
                f"{name} momentum projection has {len(node_idx)} nodes, "
                f"expected {len(target)}")
        hits = [proj[i] for i in node_idx]
        shift = next((s for s in range(len(target))
                      if hits == [target[(i + s) % len(target)]
                                  for i in range(len(target))]), None)
        if shift is None:
            raise ProjectionMismatch(
                f"{name} momentum projection misses the child nodes")
        report[f"{name}_momentum_shift"] = shift
        for i, t in enumerate(types):
            if t == want:
                continue
            prev_i = max((j for j in node_idx if j < i), default=node_idx[-1])
            a = proj[prev_i]
            pos = node_idx.index(prev_i)
            b = target[(pos + shift + 1) % len(target)]
            if proj[i] != a and not _on_segment(proj[i], a, b):
                raise ProjectionMismatch(
                    f"{name} momentum projection leaves the child polyline")
        total = momentum_length(record, pair.H)
        if total != momentum_length(rec, child.H):
            raise ProjectionMismatch("momentum projection length mismatch")
    return report


# ---------------------------------------------------------------------------
# statistical verification

@dataclass
class HannerReport:
    tree: dict
    dim: int
    samples: int
    closed: int = 0
    simple: int = 0
    length_exact: int = 0
    period_exact: int = 0
    symmetric_q: int = 0
    symmetric_p: int = 0
    rejected_starts: int = 0
    nonclassical: int = 0

    @property
    def all_ok(self):
        return all(c == self.samples for c in (
            self.closed, self.simple, self.length_exact, self.period_exact,
            self.symmetric_q, self.symmetric_p))

    def to_json(self):
        d = dict(self.__dict__)
        d["all_ok"] = self.all_ok
        return d


def verify_hanner(tree, samples=100, seed=0, rng=None):
    """Simulate random admissible starts in (H, H_polar) and count, exactly:
    closure, simplicity, length 4, period 2n, and central symmetry of both
    the coordinate and the momentum sequences.

    NonClassical starts are rejected and resampled (counted in the report).
    """
    import numpy as np
    pair = realize(tree)
    H, Hp = pair.H, pair.H_polar
    n = H.dim
    if rng is None:
        rng = np.random.Generator(np.random.Philox(seed))
    rep = HannerReport(tree=tree.to_json(), dim=n, samples=samples)
    done = 0
    while done < samples:
        phase, rejects = random_phase_point(H, Hp, rng, exact=True)
        rep.rejected_starts += rejects
        try:
            rec = simulate(phase, H, Hp, max_bounces=4 * n + 8)
        except (NonClassical, NotClosed, Degenerate):
            rep.nonclassical += 1
            if rep.nonclassical > 20 * samples:
                raise
            continue
        done += 1
        rep.closed += rec.closed
        rep.simple += rec.simple
        rep.length_exact += (rec.length == 4)
        rep.period_exact += (rec.period == 2 * n)
        qs = rec.coordinates()
        ps = rec.momenta()
        m = len(qs)
        if m == 2 * n:
            rep.symmetric_q += all(
                qs[i] == tuple(-c for c in qs[(i + n) % m]) for i in range(m))
            rep.symmetric_p += all(
                ps[i] == tuple(-c for c in ps[(i + n) % m]) for i in range(m))
    return rep
