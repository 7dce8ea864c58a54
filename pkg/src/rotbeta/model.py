"""The rotational beta transformation and its unit-square conjugate.

A model is fixed by ``q`` (with rotation index ``p``), the expansion
constant ``beta``, and the complex parameters ``eta1, eta2, xi``.  Complex
numbers are elements ``u + v*zeta`` of ``K(zeta)`` where ``K`` is a real
number field containing ``beta`` and ``zeta + 1/zeta``.  In the chart
``kappa(xi + x*eta1 + y*eta2) = (x, y)`` the map ``T(z) = beta*zeta*z - d``
becomes

    U(x, y) = (L1 - floor(L1), L2 - floor(L2)),
    L1 = beta*(a11*x + a12*y) + b1,   L2 = beta*(a21*x + a22*y) + b2.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .algebra import FieldError, FieldElement, NumberField, parse_element
from .geometry import clip_convex, polygon_area, sign

__all__ = [
    "ModelError",
    "RotationRing",
    "ZetaElement",
    "Digit",
    "ModelParams",
    "build_model",
    "load_params",
    "derive_coefficients",
    "digit_set",
    "step",
    "step_float",
    "expand",
    "reconstruct",
    "branch_halfplanes",
]


class ModelError(ValueError):
    pass


class RotationRing:
    """``K(zeta)`` with ``zeta^2 = c*zeta - 1`` where ``c = zeta + 1/zeta`` lies in ``K``."""

    name = "zeta"

    def __init__(self, K, q, p, trace):
        self.K = K
        self.q = q
        self.p = p
        self.c = K.coerce(trace)
        self.zeta = cmath.exp(2j * math.pi * p / q)
        if abs(float(self.c) - 2 * self.zeta.real) > 1e-9:
            raise ModelError(f"zeta + 1/zeta = {float(self.c)} does not match 2cos(2*pi*{p}/{q})")

    def coerce(self, value):
        if isinstance(value, ZetaElement):
            return value
        return ZetaElement(self, self.K.coerce(value), self.K.zero)

    @property
    def gen(self):
        return ZetaElement(self, self.K.zero, self.K.one)

    def __call__(self, u, v=0):
        return ZetaElement(self, self.K.coerce(u), self.K.coerce(v))


class ZetaElement:
    """``u + v*zeta`` with ``u, v`` in the real field ``K``."""

    __slots__ = ("ring", "u", "v")

    def __init__(self, ring, u, v):
        self.ring = ring
        self.u = u
        self.v = v

    def __repr__(self):
        return f"({self.u!r}) + ({self.v!r})*zeta"

    def _co(self, other):
        if isinstance(other, ZetaElement):
            return other
        if isinstance(other, (int, Fraction, FieldElement)):
            return self.ring.coerce(other)
        return None

    def __eq__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return self.u == o.u and self.v == o.v

    def __hash__(self):
        return hash((self.u, self.v))

    def __bool__(self):
        return bool(self.u) or bool(self.v)

    def __add__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return ZetaElement(self.ring, self.u + o.u, self.v + o.v)

    __radd__ = __add__

    def __neg__(self):
        return ZetaElement(self.ring, -self.u, -self.v)

    def __sub__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return ZetaElement(self.ring, self.u - o.u, self.v - o.v)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        vv = self.v * o.v
        return ZetaElement(self.ring, self.u * o.u - vv, self.u * o.v + self.v * o.u + self.ring.c * vv)

    __rmul__ = __mul__

    def conj(self):
        """Complex conjugate: ``zeta -> 1/zeta = c - zeta``."""
        return ZetaElement(self.ring, self.u + self.v * self.ring.c, -self.v)

    def norm(self):
        """``|self|^2`` as an element of ``K``."""
        return self.u * self.u + self.u * self.v * self.ring.c + self.v * self.v

    def inverse(self):
        n = self.norm()
        if not n:
            raise ZeroDivisionError("division by zero in K(zeta)")
        cj = self.conj()
        return ZetaElement(self.ring, cj.u / n, cj.v / n)

    def __truediv__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._co(other) * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out = self.ring.coerce(1)
        for _ in range(n):
            out = out * self
        return out

    def __complex__(self):
        return float(self.u) + float(self.v) * self.ring.zeta


@dataclass(frozen=True)
class Digit:
    """A branch of ``U``: the floor pair ``(k1, k2)``.

    ``c = (k1 - b1, k2 - b2)`` is the corresponding element of the digit set
    used by the line recurrence, and ``lattice = k1*eta1 + k2*eta2`` is the
    digit of ``T`` in the complex plane.
    """

    k1: int
    k2: int
    c1: FieldElement = field(compare=False, repr=False)
    c2: FieldElement = field(compare=False, repr=False)
    lattice: ZetaElement = field(compare=False, repr=False)
    label: str | None = field(default=None, compare=False)

    @property
    def key(self):
        return (self.k1, self.k2)

    def __str__(self):
        return self.label or f"({self.k1},{self.k2})"


@dataclass
class ModelParams:
    K: NumberField
    ring: RotationRing
    beta: FieldElement
    eta1: ZetaElement
    eta2: ZetaElement
    xi: ZetaElement
    a11: FieldElement
    a12: FieldElement
    a21: FieldElement
    a22: FieldElement
    b1: FieldElement
    b2: FieldElement
    name: str = "model"
    labels: dict = field(default_factory=dict)
    names: dict = field(default_factory=dict)

    def __post_init__(self):
        be = self.beta
        self.lin1 = (be * self.a11, be * self.a12, self.b1)
        self.lin2 = (be * self.a21, be * self.a22, self.b2)
        self.lin1_f = tuple(float(v) for v in self.lin1)
        self.lin2_f = tuple(float(v) for v in self.lin2)
        self.beta_f = float(self.beta)
        self._digits = {}

    @property
    def q(self):
        return self.ring.q

    @property
    def matrix(self):
        return ((self.a11, self.a12), (self.a21, self.a22))

    @property
    def adjugate(self):
        return ((self.a22, -self.a12), (-self.a21, self.a11))

    def L(self, p):
        x, y = p
        a, b, c = self.lin1
        d, e, f = self.lin2
        return a * x + b * y + c, d * x + e * y + f

    def digit(self, k1, k2):
        key = (k1, k2)
        if key not in self._digits:
            label = None
            for name, pair in self.labels.items():
                if tuple(pair) == key:
                    label = name
            self._digits[key] = Digit(k1, k2, k1 - self.b1, k2 - self.b2,
                                      self.eta1 * k1 + self.eta2 * k2, label)
        return self._digits[key]

    def branch(self, digit, p):
        """Affine branch of ``U`` for ``digit`` applied to ``p`` (no range check)."""
        l1, l2 = self.L(p)
        return (l1 - digit.k1, l2 - digit.k2)

    def branch_inverse(self, digit, p):
        """Preimage of ``p`` under the affine branch of ``digit``."""
        x, y = p
        u = x + digit.c1
        v = y + digit.c2
        (m11, m12), (m21, m22) = self.adjugate
        inv = 1 / self.beta
        return ((m11 * u + m12 * v) * inv, (m21 * u + m22 * v) * inv)

    def to_complex(self, p):
        x, y = p
        return complex(self.xi) + float(x) * complex(self.eta1) + float(y) * complex(self.eta2)

    def corners(self):
        xi, e1, e2 = complex(self.xi), complex(self.eta1), complex(self.eta2)
        return [xi, xi + e1, xi + e1 + e2, xi + e2]

    def diameter(self):
        c = self.corners()
        return max(abs(a - b) for a in c for b in c)


def derive_coefficients(ring, beta, eta1, eta2, xi):
    """Solve ``zeta*eta_j`` and ``(beta*zeta - 1)*xi`` in the basis ``eta1, eta2``.

    Returns ``(a11, a12, a21, a22, b1, b2)`` with
    ``zeta*eta1 = a11*eta1 + a21*eta2`` and ``zeta*eta2 = a12*eta1 + a22*eta2``.
    """
    det = eta1.u * eta2.v - eta2.u * eta1.v
    if not det:
        raise ModelError("eta1/eta2 is real: degenerate fundamental domain")

    def solve(w):
        s = (w.u * eta2.v - eta2.u * w.v) / det
        t = (eta1.u * w.v - eta1.v * w.u) / det
        return s, t

    z = ring.gen
    a11, a21 = solve(z * eta1)
    a12, a22 = solve(z * eta2)
    b1, b2 = solve((z * beta - 1) * xi)
    _check_rotation(ring.q, a11, a12, a21, a22)
    return a11, a12, a21, a22, b1, b2


def _matmul(m, n):
    return tuple(tuple(m[i][0] * n[0][j] + m[i][1] * n[1][j] for j in range(2)) for i in range(2))


def _check_rotation(q, a11, a12, a21, a22):
    det = a11 * a22 - a12 * a21
    if det != 1:
        raise ModelError(f"rotation matrix has determinant {det!r}, expected 1")
    m = ((a11, a12), (a21, a22))
    acc = m
    for _ in range(q - 1):
        acc = _matmul(acc, m)
    if not (acc[0][0] == 1 and acc[1][1] == 1 and acc[0][1] == 0 and acc[1][0] == 0):
        raise ModelError(f"rotation matrix to the power {q} is not the identity")


def build_model(K, q, beta, eta1, eta2, xi=None, *, p=1, trace=None, xi_image=None, b=None,
                name="model", labels=None, names=None):
    """Assemble :class:`ModelParams`.

    Parameters may be field elements or expressions; complex parameters are
    parsed over ``K(zeta)`` with the symbols ``zeta``, ``beta`` and the
    generator of ``K``.  Exactly one of ``xi``, ``xi_image`` (the value of
    ``(beta*zeta - 1)*xi``) or ``b`` must be given.
    """
    if math.gcd(p, q) != 1 or q <= 2:
        raise ModelError("need q > 2 and rotation index coprime to q")
    if trace is None:
        exact = {3: -1, 4: 0, 6: 1}
        if q not in exact or p % q not in (1, q - 1):
            raise ModelError(f"q={q}: supply zeta + 1/zeta as an element of the field")
        trace = exact[q]
    names = dict(names or {})
    scalar_names = dict(names)
    if isinstance(beta, str):
        beta = parse_element(beta, K, scalar_names)
    beta = K.coerce(beta)
    scalar_names["beta"] = beta
    if isinstance(trace, str):
        trace = parse_element(trace, K, scalar_names)
    ring = RotationRing(K, q, p, trace)
    _check_trace_minpoly(ring)
    cnames = {k: ring.coerce(v) for k, v in scalar_names.items()}
    if K.degree > 1 and K.name not in cnames:
        cnames[K.name] = ring.coerce(K.gen)

    def cx(value):
        if isinstance(value, ZetaElement):
            return value
        if isinstance(value, (list, tuple)):
            return ZetaElement(ring, K.coerce(cplx_part(value[0])), K.coerce(cplx_part(value[1])))
        if isinstance(value, str):
            return parse_element(value, ring, cnames)
        return ring.coerce(value)

    def cplx_part(v):
        return parse_element(v, K, scalar_names) if isinstance(v, str) else v

    if float(beta) <= 1:
        raise ModelError("beta must exceed 1")
    eta1, eta2 = cx(eta1), cx(eta2)
    given = [v is not None for v in (xi, xi_image, b)]
    if sum(given) > 1:
        raise ModelError("give only one of xi, xi_image, b")
    if b is not None:
        b1, b2 = (K.coerce(cplx_part(v)) for v in b)
        xi = (eta1 * b1 + eta2 * b2) / (ring.gen * beta - 1)
    elif xi_image is not None:
        xi = cx(xi_image) / (ring.gen * beta - 1)
    else:
        xi = cx(xi if xi is not None else 0)
    a11, a12, a21, a22, b1, b2 = derive_coefficients(ring, beta, eta1, eta2, xi)
    return ModelParams(K, ring, beta, eta1, eta2, xi, a11, a12, a21, a22, b1, b2,
                       name=name, labels=dict(labels or {}), names=scalar_names)


def _check_trace_minpoly(ring):
    """Certify exactly that ``c`` is a root of the minimal polynomial of 2cos(2*pi*p/q)."""
    import sympy

    x = sympy.Symbol("x")
    mp = sympy.minimal_polynomial(2 * sympy.cos(2 * sympy.pi * ring.p / ring.q), x)
    coeffs = [Fraction(int(sympy.Rational(cf).p), int(sympy.Rational(cf).q))
              for cf in sympy.Poly(mp, x).all_coeffs()]
    acc = ring.K.zero
    for cf in coeffs:
        acc = acc * ring.c + cf
    if acc:
        raise ModelError("zeta + 1/zeta is not a root of the minimal polynomial of 2cos(2*pi*p/q)")


def load_params(path_or_dict):
    """Build a model from a JSON parameter file (or an already parsed dict)."""
    if isinstance(path_or_dict, (str, Path)):
        cfg = json.loads(Path(path_or_dict).read_text())
    else:
        cfg = dict(path_or_dict)
    fcfg = cfg.get("field", {"minpoly": [1, 0], "name": "q"})
    interval = fcfg.get("interval")
    K = NumberField(fcfg["minpoly"], name=fcfg.get("name", "beta"),
                    interval=tuple(Fraction(v) for v in interval) if interval else None,
                    approx=fcfg.get("approx"))
    extra = {}
    for key, expr in cfg.get("names", {}).items():
        extra[key] = parse_element(expr, K, extra)
    try:
        return build_model(
            K, int(cfg["q"]), cfg.get("beta", "beta"), cfg["eta1"], cfg["eta2"], cfg.get("xi"),
            p=int(cfg.get("p", 1)), trace=cfg.get("zeta_trace"), xi_image=cfg.get("xi_image"),
            b=cfg.get("b"), name=cfg.get("name", "model"), labels=cfg.get("labels"), names=extra)
    except (FieldError, KeyError) as exc:
        raise ModelError(f"invalid parameter file: {exc}") from exc


# ---------------------------------------------------------------------------
# branches and digits


def _square():
    return [(0, 0), (1, 0), (1, 1), (0, 1)]


def branch_halfplanes(params, k1, k2):
    """Closed half-planes cutting the closure of the branch domain of ``(k1, k2)`` out of the square."""
    a, b, c = params.lin1
    d, e, f = params.lin2
    return [
        (1, 0, 0), (-1, 0, 1), (0, 1, 0), (0, -1, 1),
        (a, b, c - k1), (-a, -b, k1 + 1 - c),
        (d, e, f - k2), (-d, -e, k2 + 1 - f),
    ]


def _floor_range(lin):
    a, b, c = lin
    vals = [c, a + c, b + c, a + b + c]
    return min(v.floor() for v in vals), max(v.floor() for v in vals)


def _as_field_poly(params, poly):
    K = params.K
    return [(K.coerce(x) if not isinstance(x, FieldElement) else x,
             K.coerce(y) if not isinstance(y, FieldElement) else y) for x, y in poly]


def branch_polygon(params, k1, k2):
    """Closure of the branch domain of ``(k1, k2)`` as a convex polygon (possibly degenerate)."""
    return clip_convex(_as_field_poly(params, _square()), branch_halfplanes(params, k1, k2))


def _strict_feasible(params, k1, k2, poly):
    """Does the half-open branch set ``{0<=x,y<1, k<=L<k+1}`` contain a point of ``poly``?"""
    if not poly:
        return False
    strict = [(-1, 0, 1), (0, -1, 1)]
    a, b, c = params.lin1
    d, e, f = params.lin2
    strict += [(-a, -b, k1 + 1 - c), (-d, -e, k2 + 1 - f)]
    for hp in strict:
        if not any(sign(hp[0] * x + hp[1] * y + hp[2]) > 0 for x, y in poly):
            return False
    return True


def digit_set(params, positive_measure=True):
    """Digits realised on ``[0,1)^2``.

    With ``positive_measure`` (default) only branches whose domain has
    nonempty interior are returned; otherwise every floor pair realised at
    some point is included.
    """
    key = ("digits", positive_measure)
    cache = params._digits
    if key in cache:
        return cache[key]
    lo1, hi1 = _floor_range(params.lin1)
    lo2, hi2 = _floor_range(params.lin2)
    out = []
    for k1 in range(lo1, hi1 + 1):
        for k2 in range(lo2, hi2 + 1):
            poly = branch_polygon(params, k1, k2)
            if len(poly) >= 3 and sign(polygon_area(poly)) != 0:
                out.append(params.digit(k1, k2))
            elif not positive_measure and _strict_feasible(params, k1, k2, poly):
                out.append(params.digit(k1, k2))
    cache[key] = out
    return out


# ---------------------------------------------------------------------------
# dynamics


def step(p, params):
    """Exact ``U(p)`` and the digit taken; ``p`` must lie in ``[0,1)^2``."""
    l1, l2 = params.L(p)
    k1, k2 = l1.floor(), l2.floor()
    return (l1 - k1, l2 - k2), params.digit(k1, k2)


def step_float(xs, ys, params):
    """Vectorised floating point ``U``.

    Points within rounding distance of a branch boundary may take the
    neighbouring branch; this is the documented hazard of float mode.
    """
    a, b, c = params.lin1_f
    d, e, f = params.lin2_f
    l1 = a * xs + b * ys + c
    l2 = d * xs + e * ys + f
    k1 = np.floor(l1)
    k2 = np.floor(l2)
    nx = l1 - k1
    ny = l2 - k2
    # guard against 1.0 produced by rounding
    nx = np.where(nx >= 1.0, 0.0, nx)
    ny = np.where(ny >= 1.0, 0.0, ny)
    return nx, ny, k1.astype(np.int64), k2.astype(np.int64)


def expand(p, n, params, mode="exact"):
    """First ``n`` digits of ``p`` under ``U``."""
    digits = []
    if mode == "exact":
        K = params.K
        p = (K.coerce(p[0]) if not isinstance(p[0], FieldElement) else p[0],
             K.coerce(p[1]) if not isinstance(p[1], FieldElement) else p[1])
        for _ in range(n):
            p, d = step(p, params)
            digits.append(d)
        return digits
    xs = np.array([float(p[0])])
    ys = np.array([float(p[1])])
    for _ in range(n):
        xs, ys, k1, k2 = step_float(xs, ys, params)
        digits.append(params.digit(int(k1[0]), int(k2[0])))
    return digits


def reconstruct(digits, params):
    """Partial sum ``sum d_k/(beta*zeta)^k`` and a certified error radius.

    The radius is ``max|w| / beta^N`` over the closed fundamental domain,
    since the remainder equals ``T^N(z)/(beta*zeta)^N``.
    """
    bz = params.beta_f * params.ring.zeta
    total = 0j
    power = 1 + 0j
    for d in digits:
        power = power * bz
        total += complex(d.lattice) / power
    rad = max(abs(c) for c in params.corners()) / params.beta_f ** len(digits)
    return total, rad
