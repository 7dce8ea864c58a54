"""Forward orbit of the boundary of the unit square under ``U``.

Two views are offered.  *Lines mode* follows only the carrier lines
``A*x + B*y + C = 0``: the covector ``(A, B)`` cycles with period ``q``
and the intercept obeys ``C' = beta*C + (A', B').c``.  For Pisot ``beta``
the conjugates of ``C`` stay bounded, so the set of intercepts is finite.
*Segments mode* propagates actual segments and yields the dissection of
the square used to build the sofic graph.

The non-soficness certificate for the fivefold lattice with a foreign
``beta`` lives here as well.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import FieldElement, QuadraticExtension, RATIONALS
from .geometry import clip_segment, sign
from .model import branch_halfplanes, digit_set

__all__ = [
    "LineClass",
    "Segment",
    "SoficCertificate",
    "SegmentSet",
    "seed_lines",
    "line_step",
    "intercept_closure",
    "segment_image",
    "segment_orbit_closure",
    "carrier_key",
    "nonsofic_witness",
    "nonsofic_growth_check",
    "boundary_segments",
]

DEFAULT_STATE_CAP = 10**6
DEFAULT_SEGMENT_CAP = 10**5


# ---------------------------------------------------------------------------
# lines mode


@dataclass(frozen=True)
class LineClass:
    """The line ``A*x + B*y + C = 0``; ``phase`` counts steps along the covector cycle."""

    A: object
    B: object
    C: object
    phase: int = field(default=0, compare=False)

    def corner_values(self):
        A, B, C = self.A, self.B, self.C
        return (C, A + C, B + C, A + B + C)

    def meets_square(self):
        s = [sign(v) for v in self.corner_values()]
        return min(s) <= 0 <= max(s)


def seed_lines(params):
    K = params.K
    one, zero = K.one, K.zero
    return [LineClass(one, zero, zero), LineClass(one, zero, -one),
            LineClass(zero, one, zero), LineClass(zero, one, -one)]


def _next_covector(params, A, B):
    (m11, m12), (m21, m22) = params.adjugate
    return A * m11 + B * m21, A * m12 + B * m22


def line_step(line, params, digits=None):
    """Successor lines of ``line``: one per digit, keeping those that meet the closed square."""
    if digits is None:
        digits = digit_set(params, positive_measure=False)
    A2, B2 = _next_covector(params, line.A, line.B)
    base = params.beta * line.C
    out = []
    for d in digits:
        nl = LineClass(A2, B2, base + A2 * d.c1 + B2 * d.c2, (line.phase + 1) % params.q)
        if nl.meets_square():
            out.append(nl)
    return out


@dataclass
class SoficCertificate:
    status: str
    intercepts: list = field(default_factory=list)
    bounds: dict = field(default_factory=dict)
    data: dict = field(default_factory=dict)

    @property
    def count(self):
        return len(self.intercepts)

    def to_json(self):
        def enc(v):
            return v.to_json() if hasattr(v, "to_json") else v

        out = {"status": self.status, "count": self.count}
        out["bounds"] = {k: enc(v) for k, v in self.bounds.items()}
        out["data"] = {k: (enc(v) if not isinstance(v, (list, tuple)) else [enc(x) for x in v])
                       for k, v in self.data.items()}
        out["intercepts"] = [{"A": enc(l.A), "B": enc(l.B), "C": enc(l.C)} for l in self.intercepts]
        return out


def _is_power_basis_of_beta(params):
    K = params.K
    return K.degree > 1 and params.beta == K.gen or K.degree == 1 and params.beta.is_rational()


def intercept_bounds(params, digits=None):
    """Conjugate bounds ``omega_k/(1-|beta_k|)`` and the real bound ``max(|A|+|B|)``.

    ``M`` collects ``(A,B).c`` over every covector in the cycles of the
    seeds and every digit.  Returns ``None`` entries for conjugates of modulus
    at least one (no certificate possible).
    """
    if digits is None:
        digits = digit_set(params, positive_measure=False)
    covectors = []
    K = params.K
    for A, B in ((K.one, K.zero), (K.zero, K.one)):
        for _ in range(params.q):
            A, B = _next_covector(params, A, B)
            covectors.append((A, B))
    M = [A * d.c1 + B * d.c2 for A, B in covectors for d in digits]
    real_bound = max(abs(A) + abs(B) for A, B in covectors)
    beta_conj = params.beta.conjugate_moduli() if K.degree > 1 else []
    conj = []
    for k, bk in enumerate(beta_conj):
        omega_k = max([1.0] + [m.conjugate_moduli()[k] for m in M])
        conj.append(omega_k / (1 - bk) if bk < 1 else None)
    N = 1
    for A, B in covectors:
        for v in (A, B):
            N = N * v.den // math.gcd(N, v.den)
    for d in digits:
        for v in (d.c1, d.c2):
            N = N * v.den // math.gcd(N, v.den)
    return {"conjugate": conj, "real": real_bound, "denominator": N,
            "pisot": all(b is not None for b in conj)}


def intercept_closure(params, cap=DEFAULT_STATE_CAP):
    """BFS over carrier lines reachable from the four sides of the square."""
    digits = digit_set(params, positive_measure=False)
    bounds = intercept_bounds(params, digits)
    conj_bound = bounds["conjugate"]
    seen = set()
    order = []
    queue = deque()
    for s in seed_lines(params):
        key = (s.A, s.B, s.C)
        if key not in seen:
            seen.add(key)
            order.append(s)
            queue.append(s)
    pruned = 0
    while queue:
        line = queue.popleft()
        for nl in line_step(line, params, digits):
            key = (nl.A, nl.B, nl.C)
            if key in seen:
                continue
            if bounds["pisot"] and conj_bound:
                mods = nl.C.conjugate_moduli()
                if any(m > b * (1 + 1e-9) for m, b in zip(mods, conj_bound)):
                    pruned += 1
                    continue
            seen.add(key)
            order.append(nl)
            if len(order) > cap:
                return SoficCertificate("exhausted", order, bounds, {"cap": cap})
            queue.append(nl)
    status = "finite" if bounds["pisot"] else "finite-empirical"
    return SoficCertificate(status, order, bounds, {"pruned": pruned})


# ---------------------------------------------------------------------------
# segments mode


def carrier_key(p, q):
    """Normalised coefficients ``(A, B, C)`` of the line through ``p`` and ``q``.

    ``A = 1`` unless the line is horizontal, in which case ``(0, 1, C)``.
    """
    dx = q[0] - p[0]
    dy = q[1] - p[1]
    if dy:
        B = -dx / dy
        return (1, B, -(p[0] + B * p[1]))
    if dx:
        return (0, 1, -p[1])
    raise ValueError("degenerate segment")


def _param(key, pt):
    return pt[1] if key[0] == 1 else pt[0]


def _point(key, t):
    if key[0] == 1:
        return (-(key[1] * t) - key[2], t)
    return (t, -key[2])


@dataclass(frozen=True)
class Segment:
    p: tuple
    q: tuple

    @property
    def carrier(self):
        return carrier_key(self.p, self.q)

    def to_float(self):
        return (float(self.p[0]), float(self.p[1])), (float(self.q[0]), float(self.q[1]))


def _on_boundary(p, q):
    for i in (0, 1):
        for v in (0, 1):
            if p[i] == v and q[i] == v:
                return True
    return False


def boundary_segments(params):
    K = params.K
    z, o = K.zero, K.one
    c = [(z, z), (o, z), (o, o), (z, o)]
    return [Segment(c[i], c[(i + 1) % 4]) for i in range(4)]


def segment_image(seg, params, digits=None):
    """Image of the closed segment under the closed branches of ``U``.

    The segment is cut by the closure of every positive-measure branch
    domain; each piece of positive length is mapped by its affine branch.
    Pieces lying on the closure of two branches are mapped by both, which
    covers the one-sided limits from either side.  Images inside the
    boundary of the square are discarded.
    """
    if digits is None:
        digits = digit_set(params)
    p, q = seg.p, seg.q
    out = []
    for d in digits:
        rng = clip_segment(p, q, branch_halfplanes(params, d.k1, d.k2))
        if rng is None or rng[0] == rng[1]:
            continue
        t0, t1 = rng
        a = (p[0] + (q[0] - p[0]) * t0, p[1] + (q[1] - p[1]) * t0)
        b = (p[0] + (q[0] - p[0]) * t1, p[1] + (q[1] - p[1]) * t1)
        ia = params.branch(d, a)
        ib = params.branch(d, b)
        if _on_boundary(ia, ib):
            continue
        out.append(Segment(ia, ib))
    return out


class SegmentSet:
    """Union of closed segments stored as merged intervals per carrier line."""

    def __init__(self):
        self.lines = {}

    def add(self, seg):
        """Insert ``seg``; return the parts not previously covered (as segments)."""
        key = seg.carrier
        a, b = _param(key, seg.p), _param(key, seg.q)
        if b < a:
            a, b = b, a
        ivs = self.lines.setdefault(key, [])
        new = []
        cur = a
        for lo, hi in ivs:
            if hi < cur:
                continue
            if lo > b:
                break
            if lo > cur:
                new.append((cur, lo))
            if hi > cur:
                cur = hi
            if cur >= b:
                break
        if cur < b:
            new.append((cur, b))
        if new:
            merged = []
            lo0, hi0 = a, b
            for lo, hi in ivs:
                if hi < lo0 or lo > hi0:
                    merged.append((lo, hi))
                else:
                    lo0 = lo if lo < lo0 else lo0
                    hi0 = hi if hi > hi0 else hi0
            merged.append((lo0, hi0))
            merged.sort(key=lambda iv: iv[0])
            self.lines[key] = merged
        return [Segment(_point(key, lo), _point(key, hi)) for lo, hi in new]

    def segments(self):
        out = []
        for key in sorted(self.lines, key=lambda k: tuple(float(v) for v in k)):
            for lo, hi in self.lines[key]:
                out.append(Segment(_point(key, lo), _point(key, hi)))
        return out

    def __len__(self):
        return sum(len(v) for v in self.lines.values())

    def carriers(self):
        return list(self.lines)


@dataclass
class ClosureResult:
    status: str
    segments: list
    depth: int
    boundary: list


def segment_orbit_closure(params, cap=DEFAULT_SEGMENT_CAP):
    """Iterate :func:`segment_image` from the sides of the square to a fixpoint.

    Returns the merged segment set of ``U^n(boundary)``, ``n >= 1``, with
    pieces inside the boundary of the square removed.
    """
    digits = digit_set(params)
    store = SegmentSet()
    frontier = boundary_segments(params)
    depth = 0
    while frontier:
        depth += 1
        nxt = []
        for seg in frontier:
            for img in segment_image(seg, params, digits):
                nxt.extend(store.add(img))
        if len(store) > cap:
            return ClosureResult("exhausted", store.segments(), depth, boundary_segments(params))
        frontier = nxt
    return ClosureResult("finite", store.segments(), depth - 1, boundary_segments(params))


# ---------------------------------------------------------------------------
# the fivefold non-soficness certificate

SIGMA_CYCLE = ((1, 0), ("-omega", 1), ("omega", "-omega"), (-1, "omega"), (0, -1))


def _has_sqrt5(K):
    if K.degree == 1 or K.degree % 2:
        return False
    import sympy

    x = sympy.Symbol("x")
    fac = sympy.factor_list(sympy.Poly(list(K.minpoly), x).as_expr(), extension=sympy.sqrt(5))
    return len(fac[1]) > 1 or fac[1][0][1] > 1


def nonsofic_witness(beta, K=None, omega=None):
    """Check the divergence witness for ``q = 5``, ``xi = 0``, ``eta = (1, zeta)``.

    ``beta`` is an element of ``K`` (rationals by default).  When ``sqrt 5``
    lies outside ``K`` the Galois conjugation ``omega -> 1 - omega`` over
    ``K`` exists and a strict inequality is a proof of divergence.  When
    ``sqrt 5`` lies in ``K`` (pass ``omega`` as an element of ``K``) the
    two sides are still evaluated but the status is ``inconclusive``.
    """
    if K is None:
        K = beta.field if isinstance(beta, FieldElement) else RATIONALS
    beta = K.coerce(beta)
    reasons = []
    if omega is None:
        if _has_sqrt5(K):
            raise ValueError("sqrt(5) lies in the field; pass omega as a field element")
        E = QuadraticExtension(K, 1, 1)
        w = E.gen
        b = E.coerce(beta)
        sw = E.coerce(1) - w
        split = False
    else:
        w = K.coerce(omega)
        if w * w != w + 1 or float(w) < 0:
            raise ValueError("omega must be the golden ratio")
        b = beta
        sw = 1 - w
        split = True
        reasons.append("sqrt(5) lies in Q(beta): the conjugation fixing beta does not exist")
    f1 = (-b).floor()
    f2 = (b * w).floor()
    ce = b.ceil()
    c1 = (w - 1) * f1 + f2 - b
    sc1 = (sw - 1) * f1 + f2 - b
    D = w * (f2 + ce)
    threshold = D / (b - 1)
    lhs = abs(sc1)
    strict = lhs > threshold
    if split:
        status = "inconclusive"
    elif strict:
        status = "diverges"
    else:
        status = "inconclusive"
        reasons.append("|sigma(C1)| does not exceed the threshold")
    return SoficCertificate(status, [], {"D": D, "threshold": threshold}, {
        "witness_line": ("omega - 1", 1, c1),
        "floors": (f1, f2, ce),
        "sigma_C1": sc1,
        "lhs": lhs,
        "rhs": threshold,
        "lhs_float": float(lhs),
        "rhs_float": float(threshold),
        "sigma_cycle": SIGMA_CYCLE,
        "reasons": reasons,
    })


def _sigma_quadratic(x):
    """Galois conjugate of ``a + b*omega`` in ``Q(omega)`` (``omega^2 = omega + 1``)."""
    K = x.field
    a, b = Fraction(x.num[0], x.den), Fraction(x.num[1], x.den)
    return K.from_coeffs([a + b, -b])


def nonsofic_growth_check(params, steps=10, frontier_cap=4000):
    """Exact check that ``min |sigma(C^(n))|`` grows at least like ``beta*prev - D``.

    ``params`` must be the fivefold model over ``Q(omega)`` with rational
    ``beta``.  Starting from the witness line, every successor with a digit
    of the full digit set is followed (keeping at most ``frontier_cap``
    states with smallest conjugate, which keeps the check sound).  Returns
    the list of minima and whether each step satisfied the inequality.
    """
    K = params.K
    if K.minpoly != (1, -1, -1) or not params.beta.is_rational():
        raise ValueError("growth check needs the fivefold model over Q(omega) with rational beta")
    w = K.gen
    b = params.beta
    f1, f2, ce = (-b).floor(), (b * w).floor(), b.ceil()
    D = w * (f2 + ce)
    digits = digit_set(params, positive_measure=False)
    start = LineClass(w - 1, K.one, (w - 1) * f1 + f2 - b, 1)
    frontier = {(start.A, start.B, start.C): start}
    mins = [abs(_sigma_quadratic(start.C))]
    ok = []
    for _ in range(steps):
        nxt = {}
        for line in frontier.values():
            for nl in line_step(line, params, digits):
                nxt.setdefault((nl.A, nl.B, nl.C), nl)
        if not nxt:
            break
        scored = sorted(nxt.values(), key=lambda l: float(abs(_sigma_quadratic(l.C))))
        frontier = {(l.A, l.B, l.C): l for l in scored[:frontier_cap]}
        m = min(abs(_sigma_quadratic(l.C)) for l in frontier.values())
        ok.append(m >= b * mins[-1] - D)
        mins.append(m)
    return mins, ok
