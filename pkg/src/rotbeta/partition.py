"""Planar arrangement of a finite set of segments in the unit square.

Segments are split at all pairwise intersections (exact arithmetic), the
resulting plane graph is stored as half-edges, and faces are read off by
walking boundaries.  The bounded faces are the polygons of the partition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cmp_to_key

import numpy as np

from .geometry import ear_centroid, orient, point_in_polygon, polygon_area, sign

__all__ = [
    "Face",
    "Arrangement",
    "build_arrangement",
    "locate_point",
    "euler_count",
    "faces_to_json",
    "render_svg",
]


@dataclass
class Face:
    id: int
    vertices: list
    rep: tuple
    area: object
    float_vertices: np.ndarray = field(repr=False, default=None)

    def contains(self, p):
        return point_in_polygon(p, self.vertices)


@dataclass
class Arrangement:
    vertices: list
    edges: list
    faces: list
    segments: list
    _index: object = field(default=None, repr=False)

    @property
    def V(self):
        return len(self.vertices)

    @property
    def E(self):
        return len(self.edges)

    def euler(self):
        """``V - E + F`` with the outer face counted."""
        return self.V - self.E + len(self.faces) + 1


def _fkey(p):
    return (float(p[0]), float(p[1]))


def _intersect(p, q, r, s, fp, fq, fr, fs):
    """Exact parameters ``(t, u)`` of the intersection of ``pq`` and ``rs`` or None."""
    # float prefilter on bounding boxes
    eps = 1e-9
    if (max(fp[0], fq[0]) < min(fr[0], fs[0]) - eps or max(fr[0], fs[0]) < min(fp[0], fq[0]) - eps
            or max(fp[1], fq[1]) < min(fr[1], fs[1]) - eps or max(fr[1], fs[1]) < min(fp[1], fq[1]) - eps):
        return None
    d1 = (fq[0] - fp[0], fq[1] - fp[1])
    d2 = (fs[0] - fr[0], fs[1] - fr[1])
    den_f = d1[0] * d2[1] - d1[1] * d2[0]
    if abs(den_f) > 1e-7:
        w = (fr[0] - fp[0], fr[1] - fp[1])
        t = (w[0] * d2[1] - w[1] * d2[0]) / den_f
        u = (w[0] * d1[1] - w[1] * d1[0]) / den_f
        if t < -1e-6 or t > 1 + 1e-6 or u < -1e-6 or u > 1 + 1e-6:
            return None
    D1 = (q[0] - p[0], q[1] - p[1])
    D2 = (s[0] - r[0], s[1] - r[1])
    den = D1[0] * D2[1] - D1[1] * D2[0]
    if not den:
        return None
    W = (r[0] - p[0], r[1] - p[1])
    t = (W[0] * D2[1] - W[1] * D2[0]) / den
    u = (W[0] * D1[1] - W[1] * D1[0]) / den
    if t < 0 or t > 1 or u < 0 or u > 1:
        return None
    return t, u


def _point_at(p, q, t):
    if t == 0:
        return p
    if t == 1:
        return q
    return (p[0] + (q[0] - p[0]) * t, p[1] + (q[1] - p[1]) * t)


def _half(d):
    # 0 for angles in [0, pi), 1 for [pi, 2pi)
    return 0 if (d[1] > 0 or (d[1] == 0 and d[0] > 0)) else 1


def _angle_cmp(a, b):
    ha, hb = _half(a), _half(b)
    if ha != hb:
        return ha - hb
    return -sign(a[0] * b[1] - a[1] * b[0])


def _simplify(cycle):
    """Drop repeated and collinear vertices (also removes dangling spikes)."""
    pts = list(cycle)
    changed = True
    while changed and len(pts) >= 3:
        changed = False
        out = []
        for p in pts:
            if not out or out[-1] != p:
                out.append(p)
        while len(out) > 1 and out[0] == out[-1]:
            out.pop()
        pts = out
        n = len(pts)
        for i in range(n):
            if n < 3:
                break
            if orient(pts[i - 1], pts[i], pts[(i + 1) % n]) == 0:
                del pts[i]
                changed = True
                break
    return pts


def build_arrangement(segments):
    """Planar subdivision induced by ``segments`` (``Segment`` objects or point pairs)."""
    segs = []
    for s in segments:
        p, q = (s.p, s.q) if hasattr(s, "p") else s
        if isinstance(p[0], float) or isinstance(q[0], float):
            raise TypeError("build_arrangement needs exact endpoints")
        segs.append((p, q))
    fl = [(_fkey(p), _fkey(q)) for p, q in segs]
    n = len(segs)
    cuts = [[(0, segs[i][0]), (1, segs[i][1])] for i in range(n)]
    # sweep order by min x to cut the pair loop
    order = sorted(range(n), key=lambda i: min(fl[i][0][0], fl[i][1][0]))
    active = []
    for i in order:
        xmin = min(fl[i][0][0], fl[i][1][0])
        active = [j for j in active if max(fl[j][0][0], fl[j][1][0]) >= xmin - 1e-9]
        p, q = segs[i]
        for j in active:
            r, s = segs[j]
            hit = _intersect(p, q, r, s, fl[i][0], fl[i][1], fl[j][0], fl[j][1])
            if hit is None:
                continue
            t, u = hit
            pt = _point_at(p, q, t)
            cuts[i].append((t, pt))
            cuts[j].append((u, pt))
        active.append(i)

    vid = {}
    vertices = []

    def vertex(pt):
        k = vid.get(pt)
        if k is None:
            k = vid[pt] = len(vertices)
            vertices.append(pt)
        return k

    edges = set()
    for i in range(n):
        pts = sorted(cuts[i], key=cmp_to_key(lambda a, b: sign(a[0] - b[0])))
        prev = None
        for _, pt in pts:
            v = vertex(pt)
            if prev is not None and prev != v:
                edges.add((min(prev, v), max(prev, v)))
            prev = v
    edges = sorted(edges)

    adj = [[] for _ in vertices]
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    pos = []
    for v, nbrs in enumerate(adj):
        pv = vertices[v]
        nbrs.sort(key=cmp_to_key(lambda a, b: _angle_cmp(
            (vertices[a][0] - pv[0], vertices[a][1] - pv[1]),
            (vertices[b][0] - pv[0], vertices[b][1] - pv[1]))))
        pos.append({w: k for k, w in enumerate(nbrs)})

    visited = set()
    cycles = []
    for a, b in edges:
        for u, v in ((a, b), (b, a)):
            if (u, v) in visited:
                continue
            cyc = []
            x, y = u, v
            while (x, y) not in visited:
                visited.add((x, y))
                cyc.append(x)
                nb = adj[y]
                w = nb[(pos[y][x] - 1) % len(nb)]
                x, y = y, w
            cycles.append(cyc)

    faces = []
    for cyc in cycles:
        poly = [vertices[k] for k in cyc]
        area = polygon_area(poly)
        if sign(area) <= 0:
            continue
        simple = _simplify(poly)
        # canonical start (lexicographically smallest vertex) so that the
        # representative point does not depend on the input order
        k0 = min(range(len(simple)), key=lambda k: _fkey(simple[k]))
        simple = simple[k0:] + simple[:k0]
        rep = ear_centroid(simple)
        faces.append(Face(-1, simple, rep, area,
                          np.array([_fkey(p) for p in simple], dtype=float)))
    faces.sort(key=lambda f: _fkey(f.rep))
    for k, f in enumerate(faces):
        f.id = k
    arr = Arrangement(vertices, edges, faces, segs)
    arr._index = _GridIndex(faces)
    return arr


class _GridIndex:
    """Uniform grid over the unit square mapping cells to faces whose bbox meets them."""

    def __init__(self, faces, res=64):
        self.res = res
        self.cells = [[] for _ in range(res * res)]
        for f in faces:
            lo = f.float_vertices.min(axis=0)
            hi = f.float_vertices.max(axis=0)
            i0, j0 = self._cell(lo[0] - 1e-12), self._cell(lo[1] - 1e-12)
            i1, j1 = self._cell(hi[0] + 1e-12), self._cell(hi[1] + 1e-12)
            for i in range(i0, i1 + 1):
                for j in range(j0, j1 + 1):
                    self.cells[i * res + j].append(f)

    def _cell(self, v):
        return min(self.res - 1, max(0, int(math.floor(v * self.res))))

    def candidates(self, x, y):
        return self.cells[self._cell(x) * self.res + self._cell(y)]


def locate_point(p, arr, strict=True):
    """Id of the face containing exact point ``p``.

    Returns None for points on an edge when ``strict``; otherwise the first
    face whose closure contains ``p``.
    """
    fx, fy = float(p[0]), float(p[1])
    boundary_hit = None
    for f in arr._index.candidates(fx, fy):
        r = point_in_polygon(p, f.vertices)
        if r > 0:
            return f.id
        if r == 0 and boundary_hit is None:
            boundary_hit = f.id
    return None if strict else boundary_hit


def locate_float(xs, ys, arr):
    """Vectorised float point location; returns face ids (-1 when not found)."""
    from matplotlib.path import Path

    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    out = np.full(xs.shape, -1, dtype=np.int64)
    pts = np.column_stack([xs, ys])
    for f in arr.faces:
        lo = f.float_vertices.min(axis=0)
        hi = f.float_vertices.max(axis=0)
        sel = np.nonzero((out < 0) & (xs >= lo[0]) & (xs <= hi[0]) & (ys >= lo[1]) & (ys <= hi[1]))[0]
        if sel.size == 0:
            continue
        inside = Path(f.float_vertices).contains_points(pts[sel])
        out[sel[inside]] = f.id
    return out


def euler_count(arr):
    """Bounded faces predicted by Euler's formula for a connected plane graph."""
    return arr.E - arr.V + 1


def faces_to_json(arr):
    def enc(v):
        return v.to_json() if hasattr(v, "to_json") else str(v)

    return {
        "faces": [{"id": f.id,
                   "vertices": [[enc(x), enc(y)] for x, y in f.vertices],
                   "float_vertices": f.float_vertices.tolist(),
                   "rep": [enc(f.rep[0]), enc(f.rep[1])],
                   "area": enc(f.area),
                   "area_float": float(f.area)} for f in arr.faces],
        "V": arr.V, "E": arr.E,
    }


def _palette(k):
    # golden-angle hues keep neighbouring ids apart
    return f"hsl({(k * 137.508) % 360:.1f},55%,75%)"


def render_svg(arr, size=800, labels=False):
    """Deterministic SVG: faces filled by id, segments stroked, y axis pointing up."""
    pad = 10
    s = size - 2 * pad

    def tr(p):
        return f"{pad + float(p[0]) * s:.3f},{pad + (1 - float(p[1])) * s:.3f}"

    lines = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}">']
    for f in arr.faces:
        pts = " ".join(tr(v) for v in f.vertices)
        lines.append(f'<polygon points="{pts}" fill="{_palette(f.id)}" stroke="none"/>')
    for p, q in arr.segments:
        a, b = tr(p).split(","), tr(q).split(",")
        lines.append(f'<line x1="{a[0]}" y1="{a[1]}" x2="{b[0]}" y2="{b[1]}" stroke="black" stroke-width="0.7"/>')
    lines.append(f'<rect x="{pad}" y="{pad}" width="{s}" height="{s}" fill="none" stroke="black"/>')
    if labels:
        for f in arr.faces:
            x, y = tr(f.rep).split(",")
            lines.append(f'<text x="{x}" y="{y}" font-size="9" text-anchor="middle">{f.id + 1}</text>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
