"""Static SVG rendering of bodies and trajectories (coordinate + momentum)."""

__all__ = ["scene_svg", "trajectory_svg"]

_STYLE = 'fill="none" stroke="{color}" stroke-width="{w}"'


def _bounds(point_sets, pad=0.12):
    xs = [float(p[0]) for pts in point_sets for p in pts]
    ys = [float(p[1]) for pts in point_sets for p in pts]
    lo_x, hi_x = min(xs), max(xs)
    lo_y, hi_y = min(ys), max(ys)
    span = max(hi_x - lo_x, hi_y - lo_y, 1e-9)
    m = pad * span
    return lo_x - m, lo_y - m, (hi_x - lo_x) + 2 * m, (hi_y - lo_y) + 2 * m


def _pts(points, close=False):
    s = " ".join(f"{float(x):.6g},{float(-y):.6g}" for x, y in points)
    return s + (f" {float(points[0][0]):.6g},{float(-points[0][1]):.6g}"
                if close else "")


def _panel(body, polyline, markers, origin_x, size, label):
    sets = []
    if body.kind == "polytope":
        sets.append(body.vertices)
    else:
        r = float(body.radius)
        sets.append([(-r, -r), (r, r)])
    if polyline:
        sets.append(polyline)
    x0, y0neg, w, h = _bounds(sets)
    # flip y: bounds in flipped coordinates
    ys = [-float(p[1]) for pts in sets for p in pts]
    y0 = min(ys) - 0.12 * max(w, h)
    scale = size / max(w, h)
    parts = [f'<g transform="translate({origin_x},0) scale({scale}) '
             f'translate({-x0},{-y0})">']
    if body.kind == "polytope":
        parts.append(f'<polygon points="{_pts(body.vertices)}" '
                     + _STYLE.format(color="#333", w=2.2 / scale) + "/>")
    else:
        parts.append(f'<circle cx="0" cy="0" r="{float(body.radius)}" '
                     + _STYLE.format(color="#333", w=2.2 / scale) + "/>")
    if polyline:
        parts.append(f'<polyline points="{_pts(polyline, close=True)}" '
                     + _STYLE.format(color="#c02", w=1.6 / scale) + "/>")
        for p in markers or []:
            parts.append(f'<circle cx="{float(p[0]):.6g}" '
                         f'cy="{float(-p[1]):.6g}" r="{3.0 / scale:.6g}" '
                         f'fill="#c02"/>')
    parts.append(f'<text x="{x0 + 0.02 * w}" y="{y0 + 0.07 * h}" '
                 f'font-size="{0.06 * max(w, h):.4g}" fill="#555">'
                 f'{label}</text>')
    parts.append("</g>")
    return "\n".join(parts)


def scene_svg(body, polyline=None, markers=None, size=420, label=""):
    inner = _panel(body, polyline, markers, 0, size, label)
    return (f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'width="{size}" height="{size}">\n{inner}\n</svg>\n')


def trajectory_svg(K, T, record, size=420):
    """Two panels: the table body with the coordinate polyline, and the
    geometry body with the momentum polyline."""
    qs = [tuple(map(float, b.q)) for b in record.bounces]
    ps = [tuple(map(float, b.p)) for b in record.bounces]
    left = _panel(K, qs, qs, 0, size, "coordinates")
    right = _panel(T, ps, ps, size + 24, size, "momenta")
    return (f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'width="{2 * size + 24}" height="{size}">\n{left}\n{right}\n'
            f"</svg>\n")
