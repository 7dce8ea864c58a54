"""Float simulation of ``U`` and the exact two-component construction for ``q = 4``.

Float orbits of an expanding map lose every bit of the initial condition
after a few dozen steps; statistics of long orbits are still meaningful,
individual points are not.  Near branch boundaries the float map may pick
the neighbouring branch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.sparse as sp

from .algebra import NumberField, parse_element
from .geometry import clip_convex, polygon_area, sign, subtract_convex, total_area, triangulate
from .model import branch_halfplanes, build_model, digit_set, step_float

__all__ = [
    "orbit",
    "Ensemble",
    "run_ensemble",
    "ComponentReport",
    "detect_components",
    "ulam_density",
    "iid_samples",
    "face_occupancy",
    "nonergode_field",
    "nonergode_model",
    "nonergodic_region_check",
    "verify_set_equation",
    "four_f",
    "four_g",
    "four_t",
    "support_fraction",
]


def orbit(params, seed, burn_in=1000, n=100_000, start=None):
    """Float orbit of one random (or given) start point; returns ``(xs, ys)``."""
    if start is None:
        rng = np.random.default_rng(seed)
        x, y = rng.random(2)
    else:
        x, y = (float(start[0]), float(start[1]))
    xs = np.array([x])
    ys = np.array([y])
    for _ in range(burn_in):
        xs, ys, _, _ = step_float(xs, ys, params)
    out_x = np.empty(n)
    out_y = np.empty(n)
    for i in range(n):
        xs, ys, _, _ = step_float(xs, ys, params)
        out_x[i] = xs[0]
        out_y[i] = ys[0]
    return out_x, out_y


@dataclass
class Ensemble:
    seeds: int
    burn_in: int
    n: int
    rng_seed: int
    grid: int
    occupancy: np.ndarray  # (seeds, grid*grid) visit counts
    starts: np.ndarray


def run_ensemble(params, seeds=64, burn_in=1000, n=100_000, rng_seed=0, grid=64):
    """Iterate ``seeds`` independent orbits side by side and record cell visits."""
    rng = np.random.default_rng(rng_seed)
    starts = rng.random((seeds, 2))
    xs, ys = starts[:, 0].copy(), starts[:, 1].copy()
    for _ in range(burn_in):
        xs, ys, _, _ = step_float(xs, ys, params)
    occ = np.zeros((seeds, grid * grid), dtype=np.int64)
    rows = np.arange(seeds) * (grid * grid)
    flat = occ.ravel()
    chunk = 256
    buf = np.empty((chunk, seeds), dtype=np.int64)
    done = 0
    while done < n:
        m = min(chunk, n - done)
        for i in range(m):
            xs, ys, _, _ = step_float(xs, ys, params)
            ix = np.minimum((xs * grid).astype(np.int64), grid - 1)
            iy = np.minimum((ys * grid).astype(np.int64), grid - 1)
            buf[i] = rows + ix * grid + iy
        np.add.at(flat, buf[:m].ravel(), 1)
        done += m
    return Ensemble(seeds, burn_in, n, rng_seed, grid, occ, starts)


@dataclass
class ComponentReport:
    count: int
    labels: list
    overlap: np.ndarray
    grids: list
    inconclusive: bool = False
    ambiguous_pairs: list = field(default_factory=list)

    def to_json(self):
        return {"count": self.count, "labels": self.labels, "inconclusive": self.inconclusive,
                "ambiguous_pairs": self.ambiguous_pairs,
                "support_cells": [int(g.sum()) for g in self.grids]}


def detect_components(ens, merge=0.2, low=0.05):
    """Group orbits whose visited-cell sets overlap (Jaccard index above ``merge``).

    Pairs with overlap in ``(low, merge]`` make the report inconclusive.
    """
    occ = ens.occupancy > 0
    s = occ.shape[0]
    inter = occ.astype(np.int64) @ occ.T.astype(np.int64)
    sizes = occ.sum(axis=1)
    union = sizes[:, None] + sizes[None, :] - inter
    jac = np.where(union > 0, inter / np.maximum(union, 1), 0.0)
    parent = list(range(s))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    ambiguous = []
    for i in range(s):
        for j in range(i + 1, s):
            if jac[i, j] > merge:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
            elif jac[i, j] > low:
                ambiguous.append((i, j))
    roots = sorted({find(i) for i in range(s)})
    label = {r: k for k, r in enumerate(roots)}
    labels = [label[find(i)] for i in range(s)]
    grids = [occ[np.array(labels) == k].any(axis=0).reshape(ens.grid, ens.grid) for k in range(len(roots))]
    # an ambiguous pair inside one merged component is harmless
    ambiguous = [(i, j) for i, j in ambiguous if labels[i] != labels[j]]
    return ComponentReport(len(roots), labels, jac, grids, bool(ambiguous), ambiguous)


def ulam_density(params, k=64, sub=32, tol=1e-12, max_iter=100_000):
    """Ulam approximation of the invariant density on a ``k x k`` grid.

    Returns ``(density, eigenvalue, residual)``; ``density`` integrates to 1.
    """
    if k < 16:
        raise ValueError("grid must be at least 16")
    off = (np.arange(sub) + 0.5) / sub
    ox, oy = np.meshgrid(off, off, indexing="ij")
    ox, oy = ox.ravel(), oy.ravel()
    ci, cj = np.meshgrid(np.arange(k), np.arange(k), indexing="ij")
    ci, cj = ci.ravel(), cj.ravel()
    xs = ((ci[:, None] + ox[None, :]) / k).ravel()
    ys = ((cj[:, None] + oy[None, :]) / k).ravel()
    src = np.repeat(ci * k + cj, sub * sub)
    nx, ny, _, _ = step_float(xs, ys, params)
    dst = np.minimum((nx * k).astype(np.int64), k - 1) * k + np.minimum((ny * k).astype(np.int64), k - 1)
    P = sp.csr_matrix((np.full(src.size, 1.0 / (sub * sub)), (dst, src)), shape=(k * k, k * k))
    p = np.full(k * k, 1.0 / (k * k))
    res = math.inf
    lam = 1.0
    for _ in range(max_iter):
        q = P @ p
        lam = q.sum() / p.sum()
        q /= q.sum()
        res = np.abs(q - p).max()
        p = q
        if res < tol:
            break
    else:
        raise RuntimeError(f"Ulam iteration did not converge (residual {res:.3g})")
    return p.reshape(k, k) * (k * k), float(lam), float(res)


def iid_samples(params, n, steps, rng_seed=0, chunk=1_000_000):
    """``n`` independent points distributed as ``U^steps`` of Lebesgue measure.

    For a Markov partition the density of ``U^steps`` of Lebesgue measure
    converges geometrically to the invariant density, so for moderate
    ``steps`` these are (up to that bias) independent draws from the ACIM.
    Yields chunks ``(xs, ys)``.
    """
    rng = np.random.default_rng(rng_seed)
    left = n
    while left > 0:
        m = min(chunk, left)
        xs = rng.random(m)
        ys = rng.random(m)
        for _ in range(steps):
            xs, ys, _, _ = step_float(xs, ys, params)
        yield xs, ys
        left -= m


def face_occupancy(arr, chunks):
    """Counts of points per face of an arrangement (points not located are counted apart)."""
    from .partition import locate_float

    counts = np.zeros(len(arr.faces), dtype=np.int64)
    lost = 0
    for xs, ys in chunks:
        ids = locate_float(xs, ys, arr)
        lost += int((ids < 0).sum())
        counts += np.bincount(ids[ids >= 0], minlength=len(arr.faces))
    return counts, lost


# ---------------------------------------------------------------------------
# two invariant polygons for q = 4 and small beta


def nonergode_field():
    return NumberField([1, 0, -3], name="s")


def nonergode_model(beta="1039/1000", eta1="292/100", K=None):
    K = K or nonergode_field()
    return build_model(K, 4, beta, eta1, "1/2 + (s/2)*zeta", xi=0, trace=0, name="nonergode",
                       names={"s": K.gen})


def _q(K, v):
    if isinstance(v, str):
        return parse_element(v, K)
    return K.coerce(Fraction(v) if isinstance(v, float) else v)


def nonergodic_region_check(beta, eta1, K=None):
    """Exact test of ``lower(beta) <= eta1 <= upper(beta)`` in ``Q(sqrt 3)``."""
    K = K or nonergode_field()
    b = _q(K, beta)
    e = _q(K, eta1)
    s = K.gen
    lower = s / 2 * b + 1 + s / b - s / (2 * b**3)
    upper = K.one / 2 + s / b + s / (2 * b**3)
    return lower <= e <= upper, lower, upper


def _to_kappa(params, z):
    """Complex point ``(re, im)`` (ζ = i) to chart coordinates."""
    e1, e2 = params.eta1, params.eta2
    xi = params.xi
    zr, zi = z[0] - xi.u, z[1] - xi.v
    det = e1.u * e2.v - e2.u * e1.v
    return ((zr * e2.v - e2.u * zi) / det, (e1.u * zi - e1.v * zr) / det)


def _to_complex(params, p):
    e1, e2, xi = params.eta1, params.eta2, params.xi
    return (xi.u + p[0] * e1.u + p[1] * e2.u, xi.v + p[0] * e1.v + p[1] * e2.v)


def _lin(params, v):
    a, b, _ = params.lin1
    c, d, _ = params.lin2
    return (a * v[0] + b * v[1], c * v[0] + d * v[1])


def t_limit(params, p, direction=None):
    """``U(p)``, or its limit along ``p + eps*direction`` (chart coordinates).

    Returns the image point and the transported direction.
    """
    l1, l2 = params.L(p)
    if direction is None:
        k1, k2 = l1.floor(), l2.floor()
        return (l1 - k1, l2 - k2), None
    dl = _lin(params, direction)
    ks = []
    for l, d in ((l1, dl[0]), (l2, dl[1])):
        k = l.floor()
        if l == k:
            s = sign(d)
            if s == 0:
                raise ValueError("direction runs along a discontinuity")
            if s < 0:
                k -= 1
        ks.append(k)
    return (l1 - ks[0], l2 - ks[1]), dl


def _image_pieces(params, pieces, digits):
    out = []
    for piece in pieces:
        for d in digits:
            clip = clip_convex(piece, branch_halfplanes(params, d.k1, d.k2))
            if len(clip) < 3 or sign(polygon_area(clip)) == 0:
                continue
            out.append([params.branch(d, v) for v in clip])
    return out


def _covered(pieces, cover):
    """Is the union of ``pieces`` contained in the union of ``cover`` (up to measure zero)?"""
    rest = [p for p in pieces]
    for c in cover:
        rest = subtract_convex(rest, c)
        if not rest:
            return True
    return not rest


def verify_set_equation(beta="1039/1000", eta1="292/100"):
    """Exact check of the invariant-polygon construction for ``q = 4``.

    Builds the rectangle ``E`` and the octagon ``F`` from ``beta`` and
    ``eta1`` and checks ``E u F = T(E) u T^3(F)`` up to null sets, the side
    ratio of ``E``, the similarity of ``T(F)`` and ``T^2(F)`` to ``F`` and
    invariance of ``Y = E u F u T(F) u T^2(F)``.
    """
    K = nonergode_field()
    params = nonergode_model(beta, eta1, K)
    s = K.gen
    b = params.beta
    e1 = params.eta1.u
    h = s / 2
    x = e1 - h * b - K.one / 2
    y = b * x - h
    w = (h - y) / b
    gamma = -b * y + e1 - K.one / 2
    report = {"beta": str(beta), "eta1": str(eta1), "x": float(x), "y": float(y), "gamma": float(gamma)}
    problems = []
    if not (w > 0):
        problems.append("E degenerates: y >= sqrt(3)/2")
    if not (gamma > x + w):
        problems.append("F degenerates: gamma <= right side of E")
    # u + v i = T^3(gamma + sqrt(3)/2 i) approached from inside F; u + v' i = T^2(x - 1/2)
    p = _to_kappa(params, (gamma, h))
    dvec = _to_kappa_dir(params, (K.coerce(-1), K.coerce(-1)))
    try:
        for _ in range(3):
            p, dvec = t_limit(params, p, dvec)
        u, v = _to_complex(params, p)
        p2 = _to_kappa(params, (x - K.one / 2, K.zero))
        for _ in range(2):
            p2, _ = t_limit(params, p2)
        u2, v2 = _to_complex(params, p2)
    except ValueError as exc:
        problems.append(f"vertex construction failed: {exc}")
        report.update(ok=False, problems=problems)
        return report
    report.update(u=float(u), v=float(v), u_alt=float(u2), v_prime=float(v2))
    if u != u2:
        problems.append("the two constructions of u disagree")
    E = [(x, y), (x + w, y), (x + w, h), (x, h)]
    F = [(x + w, y), (gamma, y), (gamma, v), (u, v), (u, v2), (gamma, v2), (gamma, h), (x + w, h)]
    report["E_ratio_is_beta"] = (h - y) == b * w
    if problems:
        report.update(ok=False, problems=problems)
        return report
    Ek = [_to_kappa(params, pt) for pt in E]
    Fk = [_to_kappa(params, pt) for pt in F]
    if sign(polygon_area(Fk)) <= 0 or sign(polygon_area(Ek)) <= 0:
        problems.append("polygons are not counter-clockwise / simple")
        report.update(ok=False, problems=problems)
        return report
    digits = digit_set(params)
    Fpieces = triangulate(Fk)
    TE = _image_pieces(params, [Ek], digits)
    TF = _image_pieces(params, Fpieces, digits)
    T2F = _image_pieces(params, TF, digits)
    T3F = _image_pieces(params, T2F, digits)
    lhs = [Ek] + Fpieces
    rhs = TE + T3F
    report["lhs_in_rhs"] = _covered(lhs, rhs)
    report["rhs_in_lhs"] = _covered(rhs, lhs)
    report["set_equation"] = report["lhs_in_rhs"] and report["rhs_in_lhs"]
    aF = total_area(Fpieces)
    report["TF_area_ratio"] = total_area(TF) == b * b * aF
    report["T2F_area_ratio"] = total_area(T2F) == b**4 * aF
    report["F_single_branch"] = _branches_met(params, Fpieces, digits) == 1
    report["TF_single_branch"] = _branches_met(params, TF, digits) == 1
    Y = lhs + TF + T2F
    TY = _image_pieces(params, Y, digits)
    report["Y_invariant"] = _covered(TY, Y) and _covered(Y, TY)
    report["areas"] = {"E": float(abs(polygon_area(Ek))), "F": float(aF),
                       "TE": float(total_area(TE)), "T3F": float(total_area(T3F))}
    report["problems"] = problems
    report["ok"] = all(report[k] for k in ("set_equation", "E_ratio_is_beta", "TF_area_ratio",
                                           "T2F_area_ratio", "Y_invariant"))
    return report


def _to_kappa_dir(params, v):
    o = _to_kappa(params, (params.xi.u, params.xi.v))
    p = _to_kappa(params, (params.xi.u + v[0], params.xi.v + v[1]))
    return (p[0] - o[0], p[1] - o[1])


def _branches_met(params, pieces, digits):
    used = set()
    for piece in pieces:
        for d in digits:
            clip = clip_convex(piece, branch_halfplanes(params, d.k1, d.k2))
            if len(clip) >= 3 and sign(polygon_area(clip)) != 0:
                used.add(d.key)
    return len(used)


# ---------------------------------------------------------------------------
# the square-root system (q = 4, eta2 = beta*i)


def four_f(x, beta):
    b2 = beta * beta
    return -b2 * x - np.floor(-b2 * x + 1)


def four_g(y, beta):
    return -beta * beta * y - beta * np.floor(-beta * y + 1)


def four_t(x, y, beta):
    """``T(x + yi) = -beta*y - floor(-beta*y + 1) + beta*x*i`` on ``[-1,0) x [-beta,0)``."""
    return -beta * y - np.floor(-beta * y + 1), beta * x


def support_fraction(beta, n=200_000, steps=300, bins=1000, rng_seed=0, threshold=1e-4):
    """Fraction of ``[-1, 0)`` carrying mass of the invariant density of ``f``.

    ``n`` points are pushed ``steps`` times in chunks; a bin counts as
    supported when it holds more than ``threshold`` times its uniform share.
    """
    rng = np.random.default_rng(rng_seed)
    xs = -rng.random(n)
    for _ in range(steps):
        xs = four_f(xs, beta)
    hist, _ = np.histogram(xs, bins=bins, range=(-1.0, 0.0))
    share = n / bins
    return float((hist > threshold * share).mean()), hist
