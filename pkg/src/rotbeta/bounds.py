"""Geometric constants behind the ergodicity criteria.

All quantities are mpmath intervals: sines and cosines of the lattice angle
are transcendental in general, so the verdicts ``beta > B1`` and
``beta > B2`` are three-valued (``True``, ``False`` or ``None`` when the
interval does not separate).
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
from mpmath import iv

__all__ = [
    "ErgodicityReport",
    "lagrange_reduce",
    "covering_radius",
    "nu1",
    "nu2",
    "ergodic_bounds",
    "lattice_vectors",
    "refined_covering_radius",
]

DPS = 40


@contextmanager
def _prec():
    old_iv, old_mp = iv.dps, mpmath.mp.dps
    iv.dps = mpmath.mp.dps = DPS
    try:
        yield
    finally:
        iv.dps, mpmath.mp.dps = old_iv, old_mp

def _ivfield(x, eps=Fraction(1, 10**30)):
    """Interval enclosing the real embedding of a field element."""
    lo, hi = x.real_embedding(eps)
    with _prec():
        a = iv.mpf(lo.numerator) / lo.denominator
        b = iv.mpf(hi.numerator) / hi.denominator
        return iv.mpf([a.a, b.b])


def lattice_vectors(params):
    """``eta1`` and ``eta2`` as pairs of real intervals ``(re, im)``."""
    ring = params.ring
    with _prec():
        ang = 2 * iv.pi * ring.p / ring.q
        zc, zs = iv.cos(ang), iv.sin(ang)
        out = []
        for eta in (params.eta1, params.eta2):
            u, v = _ivfield(eta.u), _ivfield(eta.v)
            out.append((u + v * zc, v * zs))
    return out


def _dot(a, b):
    return a[0] * b[0] + a[1] * b[1]


def _mid(x):
    return x.mid if hasattr(x, "mid") else x


def lagrange_reduce(basis):
    """Gauss-Lagrange reduction of a planar basis.

    ``basis`` holds two vectors with float, mpf or interval entries.  The
    reduction steps are decided on midpoints and replayed on the original
    entries through the accumulated unimodular matrix, so interval inputs
    give interval outputs.  The result satisfies ``|b1| <= |b2|``,
    ``|<b1,b2>| <= |b1|^2/2`` and ``<b1,b2> <= 0``.
    """
    b1, b2 = basis
    with mpmath.workdps(DPS):
        m1 = [mpmath.mpf(_mid(c)) for c in b1]
        m2 = [mpmath.mpf(_mid(c)) for c in b2]
        if abs(m1[0] * m2[1] - m1[1] * m2[0]) < mpmath.mpf(10) ** (-DPS // 2):
            raise ValueError("degenerate lattice basis")
        U = [[1, 0], [0, 1]]  # rows: coefficients of current vectors in the input basis
        for _ in range(10000):
            if _dot(m1, m1) > _dot(m2, m2):
                m1, m2 = m2, m1
                U = [U[1], U[0]]
            mu = int(mpmath.nint(_dot(m1, m2) / _dot(m1, m1)))
            if mu == 0:
                break
            m2 = [m2[0] - mu * m1[0], m2[1] - mu * m1[1]]
            U[1] = [U[1][0] - mu * U[0][0], U[1][1] - mu * U[0][1]]
        if _dot(m1, m2) > 0:
            m2 = [-m2[0], -m2[1]]
            U[1] = [-U[1][0], -U[1][1]]

    def combo(row):
        return (row[0] * b1[0] + row[1] * b2[0], row[0] * b1[1] + row[1] * b2[1])

    return combo(U[0]), combo(U[1])


def covering_radius(basis, reduced=False):
    """Covering radius of a planar lattice: circumradius of ``0, b1, b1+b2``."""
    if not reduced:
        basis = lagrange_reduce(basis)
    b1, b2 = basis
    s = (b1[0] + b2[0], b1[1] + b2[1])
    a = _norm(b1)
    b = _norm(b2)
    c = _norm(s)
    det = abs(b1[0] * b2[1] - b1[1] * b2[0])
    return a * b * c / (2 * det)


def _norm(v):
    sq = v[0] * v[0] + v[1] * v[1]
    if isinstance(sq, iv.mpf):
        return iv.sqrt(sq)
    return mpmath.sqrt(sq)


def _sincos(b1, b2):
    n = _norm(b1) * _norm(b2)
    return abs(b1[0] * b2[1] - b1[1] * b2[0]) / n, _dot(b1, b2) / n


def nu1(s, c):
    """``nu_1`` from ``sin(theta)`` and ``cos(theta)`` (intervals or floats)."""
    t = s / (1 + c)

    def formula():
        return (1 + abs(c)) / (2 * (s + abs(c) - 1))

    if isinstance(t, iv.mpf):
        if t.a > 0.5 and t.b < 2:
            return iv.mpf(2)
        if t.b < 0.5 or t.a > 2:
            return formula()
        f = formula()
        return iv.mpf([min(2, f.a), max(2, f.b)])
    return 2 if 0.5 < t < 2 else formula()


def nu2(s, c):
    """``nu_2`` from ``sin(theta)`` and ``cos(theta)``."""
    sq = iv.sqrt if isinstance(s, iv.mpf) else mpmath.sqrt
    return 1 + sq(2) / (s * sq(1 + abs(c)))


def _imax(a, b):
    if isinstance(a, iv.mpf) or isinstance(b, iv.mpf):
        a, b = iv.mpf(a), iv.mpf(b)
        return iv.mpf([max(a.a, b.a), max(a.b, b.b)])
    return max(a, b)


def _gt(x, y):
    """Three-valued ``x > y`` for intervals."""
    x, y = iv.mpf(x), iv.mpf(y)
    if x.a > y.b:
        return True
    if x.b <= y.a:
        return False
    return None


@dataclass
class ErgodicityReport:
    theta: object
    width: object
    covering_radius: object
    nu1: object
    nu2: object
    B1: object
    B2: object
    beta: object
    beta_gt_B1: object
    beta_gt_B2: object
    extra: dict = field(default_factory=dict)

    def summary(self):
        def f(x):
            return float(mpmath.mpf(x.mid)) if isinstance(x, iv.mpf) else float(x)

        return {
            "theta": f(self.theta), "width": f(self.width),
            "covering_radius": f(self.covering_radius),
            "nu1": f(self.nu1), "nu2": f(self.nu2), "B1": f(self.B1), "B2": f(self.B2),
            "beta": f(self.beta),
            "beta_gt_B1": self.beta_gt_B1, "beta_gt_B2": self.beta_gt_B2,
            "B1_interval": str(self.B1),
            "B2_interval": str(self.B2),
            **self.extra,
        }


def ergodic_bounds(params, refine=None):
    """Constants of the ergodicity criteria for a model.

    ``refine=(depth, grid)`` additionally estimates the covering radius of
    ``L + T^{-n}(xi)`` (experimental, float only).
    """
    with _prec():
        e1, e2 = lattice_vectors(params)
        s, c = _sincos(e1, e2)
        theta = iv.atan2(s, c)
        width = _imax(0, iv.mpf([min(_norm(e1).a, _norm(e2).a), min(_norm(e1).b, _norm(e2).b)])) * s
        r = covering_radius((e1, e2))
        n1 = nu1(s, c)
        n2 = nu2(s, c)
        ratio = 2 * r / width
        B1 = _imax(n1, ratio)
        B2 = _imax(n2, ratio)
        beta = _ivfield(params.beta)
        extra = {}
        if refine:
            extra["refined_covering_radius"] = refined_covering_radius(params, *refine)
        return ErgodicityReport(theta, width, r, n1, n2, B1, B2, beta,
                                _gt(beta, B1), _gt(beta, B2), extra)


def refined_covering_radius(params, depth=2, grid=200):
    """Experimental: covering radius of ``L + T^{-n}(xi)`` estimated on a grid.

    The preimages of ``xi`` of order up to ``depth`` are enumerated through
    the inverse branches; the covering radius of the translated lattice is
    estimated as the largest distance from a grid point of the fundamental
    cell to the nearest point of the set.
    """
    import numpy as np

    from .model import digit_set

    digits = digit_set(params)
    pts = [(params.K.zero, params.K.zero)]
    layer = pts
    for _ in range(depth):
        nxt = []
        for p in layer:
            for d in digits:
                q = params.branch_inverse(d, p)
                if 0 <= q[0] < 1 and 0 <= q[1] < 1:
                    nxt.append(q)
        pts = pts + nxt
        layer = nxt
    e1, e2 = complex(params.eta1), complex(params.eta2)
    P = np.array([float(x) * e1 + float(y) * e2 for x, y in pts])
    shifts = np.array([i * e1 + j * e2 for i in (-1, 0, 1, 2) for j in (-1, 0, 1, 2)])
    cloud = (P[:, None] + shifts[None, :]).ravel()
    u = np.linspace(0, 1, grid)
    X, Y = np.meshgrid(u, u)
    G = (X * e1 + Y * e2).ravel()
    dmin = np.full(G.shape, np.inf)
    for chunk in np.array_split(cloud, max(1, len(cloud) // 256)):
        dmin = np.minimum(dmin, np.min(np.abs(G[:, None] - chunk[None, :]), axis=1))
    return float(dmin.max())
