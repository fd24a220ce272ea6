"""Billiards in convex bodies under flat Finsler norms.

Core surface:

* bodies: ConvexBody, gauge_norm, support, polar, minkowski_sum,
  central_symmetrize, width, JSON serialization;
* fitting: fit_scale (smallest homothet containing a point set);
* shortest: xi / shortest_nonfit / xi_oracle for planar bodies;
* dynamics: classical billiard simulation in polytope configurations,
  exact in rational arithmetic;
* hanner: Hanner polytopes, trajectory statistics, product composition;
* shapes: equilateral configuration, Reuleaux polygons, triangle chains;
* verify: seeded inequality batteries (also exposed via the CLI).
"""

from .bodies import (ConvexBody, body_from_json, body_to_json,
                     central_symmetrize, gauge_norm, minkowski_sum, polar,
                     reflect, support, width)
from .dynamics import (PhasePoint, TrajectoryRecord, advance, normal_at,
                       phase_point_at, random_phase_point, reflect_momentum,
                       simulate)
from .errors import (Degenerate, DimensionMismatch, GeometryError,
                     InvalidBody, NonClassical, NotClosed,
                     ProjectionMismatch)
from .fitting import FitResult, fit_scale
from .hanner import (HannerPair, HannerTree, compose_trajectory,
                     forbidden_betas, realize, verify_hanner)
from .shapes import (equilateral_config, equilateral_triangle, reuleaux,
                     triangle_data, zaslavsky_chain)
from .shortest import PolyLine, XiOptions, XiResult, shortest_nonfit, xi, \
    xi_oracle

__version__ = "0.1.0"
