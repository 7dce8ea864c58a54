"""Labelled graph of the partition and what can be read off it.

The vertices are the faces ``P_j`` of the partition.  There is an edge
``j -> k`` labelled ``d`` when ``P_k`` lies in ``U(P_j & [d])``.  Since
``U`` is affine on each branch it suffices to pull back one interior point
of ``P_k``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from collections import defaultdict, deque
from dataclasses import dataclass, field

import networkx as nx
import numpy as np
import scipy.sparse as sp

from .discontinuity import segment_orbit_closure
from .geometry import clip_convex, polygon_area
from .model import branch_halfplanes, digit_set
from .partition import build_arrangement, locate_point

__all__ = [
    "SoficGraph",
    "build_graph",
    "build_sofic",
    "analyze",
    "is_primitive",
    "period",
    "stationary_density",
    "minimize",
    "is_sft",
    "area_check",
    "to_json",
    "to_dot",
    "to_csv",
]


@dataclass
class SoficGraph:
    n: int
    edges: list  # (source, label, target)
    areas: list = field(default_factory=list)
    labels: list = field(default_factory=list)

    def digraph(self):
        """Simple digraph with the label set of each arc as attribute ``labels``."""
        g = nx.DiGraph()
        g.add_nodes_from(range(self.n))
        lab = defaultdict(set)
        for j, d, k in self.edges:
            lab[(j, k)].add(d)
        for (j, k), s in lab.items():
            g.add_edge(j, k, labels=frozenset(s))
        return g

    def out_edges(self):
        out = defaultdict(list)
        for j, d, k in self.edges:
            out[j].append((d, k))
        return out

    def in_edges(self):
        inc = defaultdict(list)
        for j, d, k in self.edges:
            inc[k].append((d, j))
        return inc

    def adjacency(self):
        a = np.zeros((self.n, self.n), dtype=np.int64)
        for j, _, k in self.edges:
            a[j, k] += 1
        return a

    def is_left_resolving(self):
        seen = set()
        for j, d, k in self.edges:
            if (k, d) in seen:
                return False
            seen.add((k, d))
        return True

    def is_right_resolving(self):
        seen = set()
        for j, d, k in self.edges:
            if (j, d) in seen:
                return False
            seen.add((j, d))
        return True

    def reversed(self):
        return SoficGraph(self.n, [(k, d, j) for j, d, k in self.edges], self.areas, self.labels)


def _in_open_square(p):
    return 0 < p[0] < 1 and 0 < p[1] < 1


def build_graph(params, arr, digits=None):
    """Edges by pulling back the representative point of each face through every branch."""
    if digits is None:
        digits = digit_set(params)
    edges = []
    for face in arr.faces:
        for d in digits:
            p = params.branch_inverse(d, face.rep)
            if not _in_open_square(p):
                continue
            j = locate_point(p, arr)
            if j is None:
                raise RuntimeError(f"preimage of face {face.id} lies on a segment: set not invariant")
            edges.append((j, str(d), face.id))
    edges.sort(key=lambda e: (e[0], e[2], e[1]))
    return SoficGraph(len(arr.faces), edges, [f.area for f in arr.faces], [str(d) for d in digits])


def build_sofic(params, cap=None):
    """Closure, arrangement and graph in one go; returns ``(closure, arrangement, graph)``."""
    kw = {} if cap is None else {"cap": cap}
    closure = segment_orbit_closure(params, **kw)
    if closure.status != "finite":
        raise RuntimeError("segment closure did not stabilise")
    arr = build_arrangement(closure.segments + closure.boundary)
    return closure, arr, build_graph(params, arr)


def area_check(params, arr, graph, digits=None):
    """Exact check ``beta^2 area(P_j & [d]) = sum of areas of the targets``.

    Returns the list of ``(j, d)`` pairs that fail (empty when consistent).
    """
    if digits is None:
        digits = digit_set(params)
    by = {str(d): d for d in digits}
    targets = defaultdict(list)
    for j, d, k in graph.edges:
        targets[(j, d)].append(k)
    b2 = params.beta * params.beta
    bad = []
    for face in arr.faces:
        for name, d in by.items():
            piece = clip_convex(face.vertices, branch_halfplanes(params, d.k1, d.k2))
            a = abs(polygon_area(piece)) if len(piece) >= 3 else 0
            s = sum((arr.faces[k].area for k in targets.get((face.id, name), [])), params.K.zero)
            if b2 * a != s:
                bad.append((face.id, name))
    return bad


def period(graph):
    g = graph.digraph()
    if not nx.is_strongly_connected(g):
        return None
    return math.gcd(*[l for l in _cycle_lengths(g)]) if g.number_of_edges() else None


def _cycle_lengths(g):
    # BFS levels give the period: gcd of level(u)+1-level(v) over edges
    root = next(iter(g.nodes))
    level = {root: 0}
    dq = deque([root])
    while dq:
        u = dq.popleft()
        for v in g.successors(u):
            if v not in level:
                level[v] = level[u] + 1
                dq.append(v)
    return [abs(level[u] + 1 - level[v]) for u, v in g.edges]


def is_primitive(graph):
    """Strongly connected with period one."""
    return period(graph) == 1


def stationary_density(graph, beta, tol=1e-12, max_iter=1_000_000):
    """Piecewise constant invariant density by power iteration.

    ``(L h)_k = beta^-2 * sum over edges j -> k of h_j``; ``h`` is normalised
    so that ``sum h_j area_j = 1``.  Returns ``(h, residual, iterations)``.
    """
    n = graph.n
    rows = [k for _, _, k in graph.edges]
    cols = [j for j, _, _ in graph.edges]
    b = float(beta)
    L = sp.csr_matrix((np.full(len(rows), 1.0 / (b * b)), (rows, cols)), shape=(n, n))
    areas = np.array([float(a) for a in graph.areas])
    h = np.ones(n) / areas.sum()
    lazy = False
    res = math.inf
    it = 0
    for it in range(1, max_iter + 1):
        nh = L @ h
        if lazy:
            nh = 0.5 * (nh + h)
        nh /= nh @ areas
        res = np.max(np.abs(nh - h))
        h = nh
        if res <= tol * 0.01:
            break
        if it == 20000 and not lazy:
            lazy = True
    res = float(np.max(np.abs(L @ h - h)))
    return h, res, it


def minimize(graph):
    """Merge states with identical follower sets (Moore refinement).

    ``graph`` must be right-resolving.  Returns ``(classes, quotient graph)``
    where ``classes[s]`` is the block of state ``s``.
    """
    if not graph.is_right_resolving():
        raise ValueError("minimize needs a right-resolving graph")
    out = graph.out_edges()
    trans = [dict(out.get(s, [])) for s in range(graph.n)]
    block = {}
    cls = []
    for s in range(graph.n):
        key = tuple(sorted(trans[s]))
        cls.append(block.setdefault(key, len(block)))
    while True:
        sig = {}
        new = []
        for s in range(graph.n):
            key = (cls[s], tuple(sorted((d, cls[t]) for d, t in trans[s].items())))
            new.append(sig.setdefault(key, len(sig)))
        if len(sig) == len(set(cls)):
            cls = new
            break
        cls = new
    edges = sorted({(cls[j], d, cls[k]) for j, d, k in graph.edges})
    return cls, SoficGraph(max(cls) + 1 if cls else 0, edges)


def _synchronizing_word(graph, limit=200_000):
    """Shortest word whose paths (in a right-resolving graph) all end in one state."""
    out = graph.out_edges()
    trans = [dict(out.get(s, [])) for s in range(graph.n)]
    start = frozenset(range(graph.n))
    prev = {start: None}
    dq = deque([start])
    while dq:
        cur = dq.popleft()
        if len(cur) == 1:
            word = []
            while prev[cur] is not None:
                cur, d = prev[cur]
                word.append(d)
            return word[::-1]
        labels = sorted({d for s in cur for d in trans[s]})
        for d in labels:
            nxt = frozenset(trans[s][d] for s in cur if d in trans[s])
            if nxt and nxt not in prev:
                prev[nxt] = (cur, d)
                if len(prev) > limit:
                    return None
                dq.append(nxt)
    return None


def is_sft(graph, direction="reverse"):
    """Is the shift presented by ``graph`` of finite type?

    The presentation is made right-resolving (by reversing a left-resolving
    graph when ``direction='reverse'``) and minimised; the shift is of
    finite type exactly when no two distinct states can follow arbitrarily
    long common label paths, i.e. the off-diagonal part of the label
    product graph is acyclic.  Returns ``(answer, info)`` where ``info``
    holds the memory bound or an offending state pair, and a synchronizing
    word when one is found.
    """
    g = graph.reversed() if direction == "reverse" else graph
    _, m = minimize(g)
    out = m.out_edges()
    trans = [defaultdict(list) for _ in range(m.n)]
    for s in range(m.n):
        for d, t in out.get(s, []):
            trans[s][d].append(t)
    pg = nx.DiGraph()
    for p in range(m.n):
        for q in range(m.n):
            if p == q:
                continue
            pg.add_node((p, q))
            for d, ts in trans[p].items():
                for t in ts:
                    for u in trans[q].get(d, []):
                        if t != u:
                            pg.add_edge((p, q), (t, u))
    info = {"states": m.n}
    try:
        cyc = nx.find_cycle(pg)
    except nx.NetworkXNoCycle:
        cyc = None
    if cyc is not None:
        info["pair_cycle"] = cyc
        return False, info
    info["memory"] = nx.dag_longest_path_length(pg) + 1 if pg.number_of_nodes() else 0
    if m.n <= 64:
        info["synchronizing_word"] = _synchronizing_word(m)
    return True, info


def analyze(graph, beta):
    h, res, it = stationary_density(graph, beta)
    sft, info = is_sft(graph)
    a = graph.adjacency()
    return {
        "states": graph.n,
        "edges": len(graph.edges),
        "left_resolving": graph.is_left_resolving(),
        "primitive": is_primitive(graph),
        "period": period(graph),
        "sft": sft,
        "sft_info": {k: (str(v) if k == "pair_cycle" else v) for k, v in info.items()},
        "perron_check": float(np.max(np.abs(a @ np.array([float(x) for x in graph.areas])
                                             - float(beta) ** 2 * np.array([float(x) for x in graph.areas])))),
        "density": h.tolist(),
        "density_residual": res,
        "iterations": it,
    }


def to_json(graph):
    return json.dumps({"states": graph.n, "labels": graph.labels,
                       "areas": [float(a) for a in graph.areas],
                       "edges": [{"from": j + 1, "label": d, "to": k + 1} for j, d, k in graph.edges]},
                      indent=1)


def to_dot(graph):
    lines = ["digraph sofic {"]
    for s in range(graph.n):
        lines.append(f'  P{s + 1};')
    lab = defaultdict(list)
    for j, d, k in graph.edges:
        lab[(j, k)].append(d)
    for (j, k), ds in sorted(lab.items()):
        lines.append(f'  P{j + 1} -> P{k + 1} [label="{",".join(sorted(ds))}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_csv(graph):
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["from", "label", "to"])
    for j, d, k in graph.edges:
        w.writerow([j + 1, d, k + 1])
    return buf.getvalue()
