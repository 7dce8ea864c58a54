"""Exact planar predicates and polygon clipping.

Everything here is generic over ordered-field scalars (``FieldElement``,
``QuadExtElement``, ``Fraction``).  Points are ``(x, y)`` tuples.  A
half-plane ``(a, b, c)`` is the closed set ``a*x + b*y + c >= 0``.
"""

from __future__ import annotations


def sign(v):
    return (v > 0) - (v < 0)


def cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def orient(o, a, b):
    return sign(cross(o, a, b))


def polygon_area(poly):
    """Signed shoelace area (positive for counter-clockwise)."""
    n = len(poly)
    if n < 3:
        return 0
    acc = 0
    for i in range(n):
        x0, y0 = poly[i]
        x1, y1 = poly[(i + 1) % n]
        acc = acc + (x0 * y1 - x1 * y0)
    return acc / 2


def hp_eval(hp, p):
    a, b, c = hp
    return a * p[0] + b * p[1] + c


def _dedupe(poly):
    out = []
    for p in poly:
        if not out or out[-1] != p:
            out.append(p)
    while len(out) > 1 and out[0] == out[-1]:
        out.pop()
    return out


def clip_halfplane(poly, hp):
    """Sutherland-Hodgman clip of ``poly`` by one closed half-plane.

    Area-correct for simple subject polygons; degenerate output (fewer than
    three vertices or zero area) is returned as is.
    """
    if not poly:
        return []
    vals = [hp_eval(hp, p) for p in poly]
    sgns = [sign(v) for v in vals]
    if all(s >= 0 for s in sgns):
        return list(poly)
    out = []
    n = len(poly)
    for i in range(n):
        p, q = poly[i], poly[(i + 1) % n]
        sp, sq = sgns[i], sgns[(i + 1) % n]
        if sp >= 0:
            out.append(p)
        if sp * sq < 0:
            t = vals[i] / (vals[i] - vals[(i + 1) % n])
            out.append((p[0] + (q[0] - p[0]) * t, p[1] + (q[1] - p[1]) * t))
    return _dedupe(out)


def clip_convex(poly, halfplanes):
    for hp in halfplanes:
        poly = clip_halfplane(poly, hp)
        if len(poly) < 3:
            return poly
    return poly


def clip_segment(p, q, halfplanes):
    """Parameter range ``(t0, t1)`` of ``p + t(q-p)`` inside all half-planes, or None."""
    t0, t1 = 0, 1
    for hp in halfplanes:
        v0 = hp_eval(hp, p)
        v1 = hp_eval(hp, q)
        s0, s1 = sign(v0), sign(v1)
        if s0 >= 0 and s1 >= 0:
            continue
        if s0 < 0 and s1 < 0:
            return None
        t = v0 / (v0 - v1)
        if s0 < 0:
            if t > t0:
                t0 = t
        else:
            if t < t1:
                t1 = t
        if t0 > t1:
            return None
    return t0, t1


def lerp(p, q, t):
    if t == 0:
        return p
    if t == 1:
        return q
    return (p[0] + (q[0] - p[0]) * t, p[1] + (q[1] - p[1]) * t)


def on_segment(pt, a, b):
    """True iff ``pt`` lies on the closed segment ``ab``."""
    if orient(a, b, pt) != 0:
        return False
    return (min_(a[0], b[0]) <= pt[0] <= max_(a[0], b[0])
            and min_(a[1], b[1]) <= pt[1] <= max_(a[1], b[1]))


def min_(a, b):
    return a if a <= b else b


def max_(a, b):
    return a if a >= b else b


def point_in_polygon(pt, poly):
    """1 inside, 0 on the boundary, -1 outside (crossing-number test, exact)."""
    n = len(poly)
    inside = False
    px, py = pt
    for i in range(n):
        a, b = poly[i], poly[(i + 1) % n]
        if on_segment(pt, a, b):
            return 0
        ay, by = a[1], b[1]
        if (ay > py) != (by > py):
            # x-coordinate of the edge at height py compared with px
            s = orient(a, b, pt)
            if by > ay:
                if s > 0:
                    inside = not inside
            else:
                if s < 0:
                    inside = not inside
    return 1 if inside else -1


def point_in_triangle(pt, a, b, c):
    """True when ``pt`` is inside or on the boundary of the ccw triangle ``abc``."""
    return orient(a, b, pt) >= 0 and orient(b, c, pt) >= 0 and orient(c, a, pt) >= 0


def ear_centroid(poly):
    """Centroid of an ear of a ccw simple polygon: a strictly interior point."""
    n = len(poly)
    for i in range(n):
        a, b, c = poly[i - 1], poly[i], poly[(i + 1) % n]
        if orient(a, b, c) <= 0:
            continue
        if any(point_in_triangle(p, a, b, c) for p in poly if p != a and p != b and p != c):
            continue
        return ((a[0] + b[0] + c[0]) / 3, (a[1] + b[1] + c[1]) / 3)
    raise ValueError("polygon has no ear (not simple or not counter-clockwise)")


def triangulate(poly):
    """Ear-clipping triangulation of a simple polygon into ccw triangles."""
    pts = _dedupe(list(poly))
    if polygon_area(pts) < 0:
        pts = pts[::-1]
    tris = []
    guard = 0
    while len(pts) > 3:
        n = len(pts)
        for i in range(n):
            a, b, c = pts[i - 1], pts[i], pts[(i + 1) % n]
            o = orient(a, b, c)
            if o == 0:
                # drop collinear (or spike) vertex
                del pts[i]
                break
            if o < 0:
                continue
            if any(point_in_triangle(p, a, b, c) for p in pts if p != a and p != b and p != c):
                continue
            tris.append((a, b, c))
            del pts[i]
            break
        else:
            raise ValueError("triangulation failed: polygon is not simple")
        guard += 1
        if guard > 10000:
            raise ValueError("triangulation did not terminate")
    if len(pts) == 3 and orient(*pts) > 0:
        tris.append(tuple(pts))
    return [list(t) for t in tris]


def edge_halfplanes(convex):
    """Half-planes whose intersection is the ccw convex polygon."""
    hps = []
    n = len(convex)
    for i in range(n):
        (x0, y0), (x1, y1) = convex[i], convex[(i + 1) % n]
        a = -(y1 - y0)
        b = x1 - x0
        c = -(a * x0 + b * y0)
        hps.append((a, b, c))
    return hps


def subtract_convex(pieces, convex):
    """Convex pieces minus a ccw convex polygon, as interior-disjoint convex pieces."""
    hps = edge_halfplanes(convex)
    out = []
    for piece in pieces:
        rest = piece
        for hp in hps:
            neg = (-hp[0], -hp[1], -hp[2])
            outside = clip_halfplane(rest, neg)
            if len(outside) >= 3 and sign(polygon_area(outside)) != 0:
                out.append(outside)
            rest = clip_halfplane(rest, hp)
            if len(rest) < 3 or sign(polygon_area(rest)) == 0:
                break
    return out


def total_area(pieces):
    acc = 0
    for p in pieces:
        acc = acc + abs(polygon_area(p)) if len(p) >= 3 else acc
    return acc
