"""Classical billiard dynamics in a polytope configuration.

Phase points live on the boundary of the position body K (coordinates) and
of the geometry body T (momenta), both restricted to facet relative
interiors: a reflection replaces the momentum by p' = p - lambda * n_K(q)
with the unique lambda > 0 returning the ray to the boundary of T, and the
following free flight moves the coordinate along the outward normal of T at
p' until it exits K.

Two arithmetic modes: bodies and starts with rational coordinates run in
exact Fraction arithmetic (closure is literal equality, drift-free over any
number of bounces); otherwise floats with the global 1e-9 tolerance.
Landing on a face of codimension >= 2 raises NonClassical; rays without a
positive crossing raise Degenerate.
"""

from dataclasses import dataclass
from fractions import Fraction

from .bodies import gauge_norm
from .errors import Degenerate, NonClassical, NotClosed
from .numeric import EPS, all_exact, coerce_point, dot, vneg, vsub

__all__ = ["PhasePoint", "TrajectoryRecord", "normal_at", "reflect_momentum",
           "advance", "simulate", "phase_point_at", "random_phase_point",
           "reversed_start", "momentum_length", "record_to_json",
           "record_from_json"]


@dataclass(frozen=True)
class PhasePoint:
    """Coordinate q on a facet of K and momentum p on a facet of T."""
    q: tuple
    p: tuple
    q_facet: int
    p_facet: int


@dataclass
class TrajectoryRecord:
    bounces: list            # PhasePoint per bounce, start first
    closed: bool
    period: int
    length: object           # Fraction in exact mode, float otherwise
    simple: bool
    lambdas: list
    mus: list
    exact: bool

    def coordinates(self):
        return [b.q for b in self.bounces]

    def momenta(self):
        return [b.p for b in self.bounces]


# ---------------------------------------------------------------------------

def _dual_vertex(P, j):
    """Facet normal scaled onto the boundary of the polar body."""
    n, c = P.facets[j]
    return tuple(x / c for x in n)


def normal_at(x, P):
    """Outward normal of P at x, scaled to lie on the polar boundary.

    Defined only on facet relative interiors; a vertex/ridge hit or an
    off-boundary point raises NonClassical.
    """
    if P.kind == "ball":
        r = float(P.radius)
        nrm = sum(float(c) ** 2 for c in x) ** 0.5
        if abs(nrm - r) > EPS * max(1.0, r):
            raise NonClassical("point is not on the sphere")
        return tuple(float(c) / r ** 2 for c in x)
    js = P.facets_containing(x)
    if not js:
        raise NonClassical("point is not on the boundary")
    if len(js) > 1:
        raise NonClassical("point lies on a face of codimension >= 2")
    if not P.contains(x):
        raise NonClassical("point is outside the body")
    return _dual_vertex(P, js[0])


def _ray_exit(x, d, P, skip_facet):
    """First positive crossing of the ray x + t*d with the boundary of P.

    Returns (t, facet).  With ``skip_facet`` set (the facet x sits on) the
    direction must point inward from it; ties between facets mean the exit
    point is on a ridge and raise NonClassical.
    """
    if skip_facet is not None:
        n0, _ = P.facets[skip_facet]
        if not (float(dot(n0, d)) < 0):
            raise Degenerate("ray does not enter the body")
    exact = all_exact(x) and all_exact(d) and P.exact
    best_t = None
    best_j = None
    tie = False
    tol = 0 if exact else EPS * max(1.0, P.scale())
    for j, (n, c) in enumerate(P.facets):
        dn = dot(n, d)
        if not (float(dn) > 0):
            continue
        t = (c - dot(n, x)) / dn
        if best_t is None:
            best_t, best_j, tie = t, j, False
            continue
        if exact:
            if t < best_t:
                best_t, best_j, tie = t, j, False
            elif t == best_t:
                tie = True
        else:
            if t < best_t - tol:
                best_t, best_j, tie = t, j, False
            elif t <= best_t + tol:
                tie = True
    if best_t is None:
        raise Degenerate("ray never exits; body unbounded?")
    if tie:
        raise NonClassical("ray exits through a face of codimension >= 2")
    if not (float(best_t) > 0):
        raise Degenerate("no positive crossing")
    return best_t, best_j


def reflect_momentum(phase, K, T):
    """Apply the reflection rule at the phase point; returns (p', lambda, facet)."""
    nu = _dual_vertex(K, phase.q_facet)
    d = vneg(nu)
    lam, j = _ray_exit(phase.p, d, T, phase.p_facet)
    p2 = tuple(pc + lam * dc for pc, dc in zip(phase.p, d))
    return p2, lam, j


def advance(q, p2, p2_facet, K, T):
    """Free flight from q along the boundary normal of T at p2.

    Returns (q', mu, facet).  The velocity is the vertex of the polar of T
    dual to the facet of p2.
    """
    v = _dual_vertex(T, p2_facet)
    qf = K.facets_containing(q)
    if len(qf) != 1:
        raise NonClassical("coordinate is not on a facet relative interior")
    mu, j = _ray_exit(q, v, K, qf[0])
    q2 = tuple(qc + mu * vc for qc, vc in zip(q, v))
    return q2, mu, j


def _states_equal(a, b, exact, scale):
    if a.q_facet != b.q_facet or a.p_facet != b.p_facet:
        return False
    if exact:
        return a.q == b.q and a.p == b.p
    tol = EPS * max(1.0, scale)
    return (all(abs(float(x) - float(y)) <= tol for x, y in zip(a.q, b.q))
            and all(abs(float(x) - float(y)) <= tol for x, y in zip(a.p, b.p)))


def phase_point_at(q, p, K, T):
    """Build a PhasePoint by locating the facets containing q and p."""
    qs = K.facets_containing(q)
    ps = T.facets_containing(p)
    if len(qs) != 1 or len(ps) != 1:
        raise NonClassical("phase point not on facet relative interiors")
    return PhasePoint(tuple(q), tuple(p), qs[0], ps[0])


def is_admissible(phase, K, T):
    """True when the reflection ray enters T from the start momentum."""
    nu = _dual_vertex(K, phase.q_facet)
    n0, _ = T.facets[phase.p_facet]
    return float(dot(n0, vneg(nu))) < 0


def simulate(start, K, T, max_bounces=None, require_simple=True):
    """Run the billiard map from an admissible start until the phase closes.

    Exact inputs run in rational arithmetic and closure is literal equality.
    Raises NonClassical (with the bounce index), Degenerate for an
    inadmissible start, and NotClosed when the budget runs out.
    """
    if max_bounces is None:
        max_bounces = 4 * K.dim + 8
    exact = (K.exact and T.exact and all_exact(start.q) and all_exact(start.p))
    q = coerce_point(start.q, exact)
    p = coerce_point(start.p, exact)
    start = PhasePoint(q, p, start.q_facet, start.p_facet)
    scale = max(K.scale(), T.scale())

    if not is_admissible(start, K, T):
        raise Degenerate("inadmissible start: reflection ray leaves T")

    bounces = [start]
    lambdas, mus = [], []
    cur = start
    closed = False
    simple = True
    for i in range(max_bounces):
        try:
            p2, lam, pj = reflect_momentum(cur, K, T)
            q2, mu, qj = advance(cur.q, p2, pj, K, T)
        except NonClassical as e:
            raise NonClassical(str(e), bounce=i) from None
        lambdas.append(lam)
        mus.append(mu)
        nxt = PhasePoint(q2, p2, qj, pj)
        if _states_equal(nxt, start, exact, scale):
            closed = True
            break
        for prev in bounces[1:]:
            if _states_equal(nxt, prev, exact, scale):
                simple = False
        bounces.append(nxt)
        cur = nxt

    period = len(bounces) if closed else 0
    pts = [b.q for b in bounces]
    length = 0
    n_edges = len(pts) if closed else len(pts) - 1
    for i in range(n_edges):
        length = length + gauge_norm(vsub(pts[(i + 1) % len(pts)], pts[i]), T)
    record = TrajectoryRecord(bounces=bounces, closed=closed, period=period,
                              length=length, simple=simple and closed,
                              lambdas=lambdas, mus=mus, exact=exact)
    if not closed:
        raise NotClosed(f"not closed after {max_bounces} bounces",
                        record=record)
    return record


def momentum_length(record, K):
    """Length of the momentum polyline measured with unit ball the polar of K."""
    ps = [b.p for b in record.bounces]
    total = 0
    for i in range(len(ps)):
        total = total + gauge_norm(vsub(ps[(i + 1) % len(ps)], ps[i]), K)
    return total


def reversed_start(record, K, T):
    """Start phase of the time-reversed trajectory, valid in (K, -T).

    The reversed path visits the coordinates backwards with negated momenta;
    its length in the reflected geometry equals the original length.
    """
    from .bodies import reflect
    Trev = reflect(T)
    b = record.bounces
    q = b[-1].q
    p = vneg(b[0].p)
    return phase_point_at(q, p, K, Trev), Trev


# ---------------------------------------------------------------------------
# JSON form (consumed by the CLI plotter)

def record_to_json(record):
    from .bodies import _num_to_json as enc
    return {
        "bounces": [{"q": [enc(c) for c in b.q], "p": [enc(c) for c in b.p],
                     "q_facet": b.q_facet, "p_facet": b.p_facet}
                    for b in record.bounces],
        "closed": record.closed,
        "period": record.period,
        "length": enc(record.length),
        "simple": record.simple,
        "lambdas": [enc(x) for x in record.lambdas],
        "mus": [enc(x) for x in record.mus],
        "exact": record.exact,
    }


def record_from_json(obj):
    import json as _json
    from .bodies import _num_from_json as dec
    if isinstance(obj, str):
        obj = _json.loads(obj)
    bounces = [PhasePoint(tuple(dec(c) for c in b["q"]),
                          tuple(dec(c) for c in b["p"]),
                          b["q_facet"], b["p_facet"])
               for b in obj["bounces"]]
    return TrajectoryRecord(bounces=bounces, closed=obj["closed"],
                            period=obj["period"],
                            length=dec(obj["length"]), simple=obj["simple"],
                            lambdas=[dec(x) for x in obj["lambdas"]],
                            mus=[dec(x) for x in obj["mus"]],
                            exact=obj["exact"])


# ---------------------------------------------------------------------------
# random admissible starts

def _combo(vertices, weights):
    pt = tuple(0 * c for c in vertices[0])
    for w, v in zip(weights, vertices):
        pt = tuple(a + w * c for a, c in zip(pt, v))
    return pt


def _weights(rng, k, exact, den=2 ** 16):
    if exact:
        raw = [Fraction(int(rng.integers(1, den)), den) for _ in range(k)]
    else:
        raw = [float(rng.uniform(1e-3, 1.0)) for _ in range(k)]
    s = sum(raw)
    return [w / s for w in raw]


def random_facet_point(P, rng, exact=True):
    """Uniform facet choice, interior barycentric point on it.

    Returns (point, facet index); the point is a strictly positive convex
    combination of the facet's vertices, so it lies in the relative interior.
    """
    j = int(rng.integers(0, len(P.facets)))
    verts = [P.vertices[i] for i in P.facet_vertex_indices(j)]
    return _combo(verts, _weights(rng, len(verts), exact)), j


def random_phase_point(K, T, rng, exact=None, max_tries=500):
    """Sample an admissible classical start: uniform facet, interior
    barycentric point (rational weights with denominator 2^16 in exact mode).

    Returns (phase, rejects).
    """
    if exact is None:
        exact = K.exact and T.exact
    rejects = 0
    for _ in range(max_tries):
        q, qj = random_facet_point(K, rng, exact)
        p, pj = random_facet_point(T, rng, exact)
        if len(K.facets_containing(q)) != 1 or len(T.facets_containing(p)) != 1:
            rejects += 1
            continue
        phase = PhasePoint(q, p, qj, pj)
        if not is_admissible(phase, K, T):
            rejects += 1
            continue
        return phase, rejects
    raise Degenerate(f"no admissible start found in {max_tries} tries")
