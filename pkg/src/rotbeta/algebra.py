"""Exact arithmetic in real number fields and their quadratic extensions.

Elements of ``Q(theta)`` are stored in the power basis ``1, theta, ...,
theta^(d-1)`` as an integer numerator vector over a positive common
denominator, so every element is literally ``p(theta)/N``.  Order
relations refer to the distinguished real embedding fixed by an
isolating interval of the minimal polynomial.  Sign decisions try a
floating point evaluation with a rigorous error bound first and fall back
to exact fixed-point interval evaluation with doubling precision.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import mpmath

__all__ = [
    "FieldError",
    "NumberField",
    "FieldElement",
    "QuadraticExtension",
    "QuadExtElement",
    "RATIONALS",
    "is_pisot",
    "parse_element",
    "compositum",
]


class FieldError(ValueError):
    """Raised for invalid field constructions or mixed-field arithmetic."""


def _poly_eval_int(coeffs_high, m, k):
    """Return 2**(k*deg) * f(m / 2**k) as an exact integer."""
    acc = 0
    scale = 1
    for c in coeffs_high:
        acc = acc * m + c * scale
        scale <<= k
    return acc


def _sgn(v):
    return (v > 0) - (v < 0)


class NumberField:
    """The real field ``Q(theta)`` for a root ``theta`` of a monic integer polynomial.

    ``minpoly`` lists integer coefficients, leading coefficient first.  The
    distinguished real root is selected by ``interval`` (rational
    endpoints), by ``approx`` (closest real root), or else the largest real
    root is taken.
    """

    def __init__(self, minpoly, name="beta", interval=None, approx=None, check=True):
        coeffs = tuple(int(c) for c in minpoly)
        if not coeffs or coeffs[0] != 1:
            raise FieldError("minimal polynomial must be monic with integer coefficients")
        if len(coeffs) < 2:
            raise FieldError("minimal polynomial must have positive degree")
        self.minpoly = coeffs
        self.degree = len(coeffs) - 1
        self.name = name
        d = self.degree
        low = coeffs[::-1]
        tail = [-c for c in low[:-1]]  # theta^d = sum tail[i] theta^i
        red = [tail]
        for _ in range(d, 2 * d - 2):
            prev = red[-1]
            nxt = [0] + prev[:-1]
            top = prev[-1]
            if top:
                nxt = [a + top * t for a, t in zip(nxt, tail)]
            red.append(nxt)
        self._red = tuple(tuple(r) for r in red)
        if check and d > 1:
            self._check_irreducible()
        self._isolate(interval, approx)
        self._bits_cache = {}
        b = self.bounds_at(64)
        self.approx = float(Fraction(2 * b[0] + 1, 2 << 64))
        self._pow_f = tuple(self.approx**i for i in range(d))
        self.zero = FieldElement._raw(self, (0,) * d, 1)
        self.one = FieldElement._raw(self, (1,) + (0,) * (d - 1), 1)

    def __repr__(self):
        return f"NumberField({list(self.minpoly)}, name={self.name!r}, ~{self.approx:.12g})"

    # -- construction helpers -------------------------------------------------

    def _check_irreducible(self):
        import sympy

        x = sympy.Symbol("x")
        poly = sympy.Poly(list(self.minpoly), x)
        if not poly.is_irreducible:
            raise FieldError(f"minimal polynomial {list(self.minpoly)} is reducible over Q")

    def _isolate(self, interval, approx):
        if self.degree == 1:
            root = Fraction(-self.minpoly[1])
            self.interval = (root, root)
            self.rational_root = root
            return
        self.rational_root = None
        import sympy

        x = sympy.Symbol("x")
        poly = sympy.Poly(list(self.minpoly), x)
        if interval is not None:
            lo, hi = Fraction(interval[0]), Fraction(interval[1])
            n = poly.count_roots(sympy.Rational(lo.numerator, lo.denominator),
                                 sympy.Rational(hi.numerator, hi.denominator))
            if n != 1:
                raise FieldError(f"interval [{lo}, {hi}] contains {n} roots, expected exactly one")
            self.interval = (lo, hi)
            return
        ivs = [(Fraction(int(a.p), int(a.q)), Fraction(int(b.p), int(b.q)))
               for (a, b), _ in poly.intervals()]
        if not ivs:
            raise FieldError("minimal polynomial has no real root")
        if approx is None:
            self.interval = ivs[-1]
        else:
            target = Fraction(approx)
            self.interval = min(ivs, key=lambda ab: abs((ab[0] + ab[1]) / 2 - target))

    def bounds_at(self, k):
        """Integer ``B`` with ``B/2^k <= theta <= (B+1)/2^k``."""
        if k in self._bits_cache:
            return self._bits_cache[k]
        if self.rational_root is not None:
            r = self.rational_root
            B = math.floor(r * (1 << k))
            self._bits_cache[k] = (B, B + 1)
            return self._bits_cache[k]
        coarser = [kk for kk in self._bits_cache if kk < k]
        if coarser:
            kk = max(coarser)
            lo = self._bits_cache[kk][0] << (k - kk)
            hi = (self._bits_cache[kk][0] + 1) << (k - kk)
        else:
            a, b = self.interval
            lo = math.floor(a * (1 << k))
            hi = math.ceil(b * (1 << k))
        f = self.minpoly
        slo = _sgn(_poly_eval_int(f, lo, k))
        shi = _sgn(_poly_eval_int(f, hi, k))
        if slo == 0:
            hi = lo + 1
        elif shi == 0:
            lo, hi = hi, hi + 1
        else:
            if slo == shi:
                raise FieldError("isolating interval lost its root during refinement")
            while hi - lo > 1:
                mid = (lo + hi) // 2
                s = _sgn(_poly_eval_int(f, mid, k))
                if s == 0:
                    lo, hi = mid, mid + 1
                    break
                if s == slo:
                    lo = mid
                else:
                    hi = mid
        self._bits_cache[k] = (lo, lo + 1)
        return self._bits_cache[k]

    # -- element constructors ---------------------------------------------------

    def __call__(self, value):
        return self.coerce(value)

    def coerce(self, value):
        if isinstance(value, FieldElement):
            if value.field is not self:
                raise FieldError("element belongs to a different field")
            return value
        if isinstance(value, (int, Fraction)):
            v = Fraction(value)
            return FieldElement._make(self, [v.numerator] + [0] * (self.degree - 1), v.denominator)
        if isinstance(value, str):
            return parse_element(value, self)
        raise TypeError(f"cannot coerce {type(value).__name__} into {self!r}")

    def from_coeffs(self, coeffs):
        """Element with rational power-basis coordinates ``coeffs`` (low degree first)."""
        coeffs = [Fraction(c) for c in coeffs]
        if len(coeffs) > self.degree:
            raise FieldError("too many coefficients for this field")
        coeffs += [Fraction(0)] * (self.degree - len(coeffs))
        den = 1
        for c in coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        return FieldElement._make(self, [int(c * den) for c in coeffs], den)

    @property
    def gen(self):
        if self.degree == 1:
            return self.coerce(self.rational_root)
        return FieldElement._make(self, [0, 1] + [0] * (self.degree - 2), 1)

    def roots_numeric(self, dps=50):
        """All complex roots at ``dps`` digits; the distinguished one first."""
        with mpmath.workdps(dps):
            roots = mpmath.polyroots([mpmath.mpf(c) for c in self.minpoly], maxsteps=400, extraprec=4 * dps)
            target = mpmath.mpf(self.approx)
            roots = sorted(roots, key=lambda r: abs(r - target))
        return roots


class FieldElement:
    """Element ``sum(num[i] * theta**i) / den`` of a :class:`NumberField`."""

    __slots__ = ("field", "num", "den", "_approx", "_hash")

    @classmethod
    def _raw(cls, field, num, den):
        self = object.__new__(cls)
        self.field = field
        self.num = num
        self.den = den
        self._approx = None
        self._hash = None
        return self

    @classmethod
    def _make(cls, field, num, den):
        if den < 0:
            num = [-c for c in num]
            den = -den
        g = math.gcd(den, *num)
        if g != 1:
            num = [c // g for c in num]
            den //= g
        return cls._raw(field, tuple(num), den)

    # -- basic protocol -------------------------------------------------------------

    def coeffs(self):
        """Rational power-basis coordinates, low degree first."""
        return [Fraction(c, self.den) for c in self.num]

    def is_rational(self):
        return not any(self.num[1:])

    def to_fraction(self):
        if not self.is_rational():
            raise FieldError("element is irrational")
        return Fraction(self.num[0], self.den)

    def __repr__(self):
        terms = []
        name = self.field.name
        for i, c in enumerate(self.coeffs()):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append(f"{c}*{name}")
            else:
                terms.append(f"{c}*{name}^{i}")
        return " + ".join(terms) if terms else "0"

    def to_json(self):
        return [str(c) for c in self.coeffs()]

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                return NotImplemented
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and Fraction(self.num[0], self.den) == other
        return NotImplemented

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __bool__(self):
        return any(self.num)

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise FieldError("mixed-field arithmetic")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.coerce(other)
        return None

    # -- arithmetic -------------------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return FieldElement._make(self.field, [a + b for a, b in zip(self.num, o.num)], self.den)
        return FieldElement._make(self.field, [a * o.den + b * self.den for a, b in zip(self.num, o.num)],
                                  self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement._raw(self.field, tuple(-a for a in self.num), self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return FieldElement._make(self.field, [a - b for a, b in zip(self.num, o.num)], self.den)
        return FieldElement._make(self.field, [a * o.den - b * self.den for a, b in zip(self.num, o.num)],
                                  self.den * o.den)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, int):
            return FieldElement._make(self.field, [a * other for a in self.num], self.den)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        f = self.field
        d = f.degree
        a, b = self.num, o.num
        if d == 1:
            return FieldElement._make(f, [a[0] * b[0]], self.den * o.den)
        prod = [0] * (2 * d - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        prod[i + j] += ai * bj
        res = prod[:d]
        red = f._red
        for k in range(d, 2 * d - 1):
            c = prod[k]
            if c:
                row = red[k - d]
                for i in range(d):
                    if row[i]:
                        res[i] += c * row[i]
        return FieldElement._make(f, res, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self):
        if not any(self.num):
            raise ZeroDivisionError("division by zero in number field")
        inv_num, inv_den = _inverse_num(self.field, self.num)
        # (num/den)^-1 = den * inv_num / inv_den
        return FieldElement._make(self.field, [c * self.den for c in inv_num], inv_den)

    def __truediv__(self, other):
        if isinstance(other, int):
            if other == 0:
                raise ZeroDivisionError("division by zero in number field")
            return FieldElement._make(self.field, list(self.num), self.den * other)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_rational():
            if not o.num[0]:
                raise ZeroDivisionError("division by zero in number field")
            return FieldElement._make(self.field, [a * o.den for a in self.num], self.den * o.num[0])
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- real embedding -------------------------------------------------------------

    def __float__(self):
        if self._approx is None:
            f = self.field
            try:
                s = sum(float(c) * p for c, p in zip(self.num, f._pow_f) if c)
                self._approx = s / float(self.den)
            except OverflowError:
                lo, hi = self.real_embedding(Fraction(1, 1 << 60))
                self._approx = float((lo + hi) / 2)
        return self._approx

    def _interval_scaled(self, k):
        """Integers (lo, hi) with lo <= 2^(k(d-1)) * num(theta) <= hi."""
        f = self.field
        d = f.degree
        B, B1 = f.bounds_at(k)
        lo = hi = 0
        for i, c in enumerate(self.num):
            if not c:
                continue
            e0, e1 = B**i, B1**i
            plo, phi = (e0, e1) if e0 <= e1 else (e1, e0)
            shift = k * (d - 1 - i)
            plo <<= shift
            phi <<= shift
            if c > 0:
                lo += c * plo
                hi += c * phi
            else:
                lo += c * phi
                hi += c * plo
        return lo, hi

    def sign(self):
        num = self.num
        if not any(num):
            return 0
        f = self.field
        if f.degree == 1 or not any(num[1:]):
            return _sgn(num[0])
        try:
            s = 0.0
            m = 0.0
            for c, p in zip(num, f._pow_f):
                if c:
                    t = float(c) * p
                    s += t
                    m += abs(t)
            if abs(s) > m * 1e-12:
                return 1 if s > 0 else -1
        except OverflowError:
            pass
        k = 96
        while True:
            lo, hi = self._interval_scaled(k)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            k *= 2

    def real_embedding(self, eps=Fraction(1, 10**12)):
        """Rational interval of width <= eps containing the real value."""
        eps = Fraction(eps)
        f = self.field
        if self.is_rational():
            v = Fraction(self.num[0], self.den)
            return (v, v)
        d = f.degree
        k = 64
        while True:
            lo, hi = self._interval_scaled(k)
            scale = self.den << (k * (d - 1))
            if Fraction(hi - lo, scale) <= eps:
                return Fraction(lo, scale), Fraction(hi, scale)
            k *= 2

    def floor(self):
        if self.is_rational():
            return math.floor(Fraction(self.num[0], self.den))
        n = math.floor(float(self))
        while (self - n).sign() < 0:
            n -= 1
        while (self - (n + 1)).sign() >= 0:
            n += 1
        return n

    def ceil(self):
        return -((-self).floor())

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def _cmp(self, other):
        o = self._coerce(other)
        if o is None:
            return None
        return (self - o).sign()

    def __lt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c >= 0

    # -- conjugates -------------------------------------------------------------------

    def conjugate_values(self, dps=50):
        """Numeric values under every embedding; the distinguished one first."""
        roots = self.field.roots_numeric(dps)
        with mpmath.workdps(dps):
            return [sum(mpmath.mpf(c) * r**i for i, c in enumerate(self.num)) / self.den for r in roots]

    def conjugate_moduli(self, eps=1e-20):
        """Upper bounds on ``|sigma_k(a)|`` for the non-distinguished embeddings."""
        dps = max(30, int(-math.log10(float(eps))) + 20)
        vals = self.conjugate_values(dps)
        margin = mpmath.mpf(10) ** (-(dps - 10))
        out = []
        for v in vals[1:]:
            out.append(float(abs(v) + margin * (1 + abs(v))))
        return out

    def common_denominator(self):
        """``(N, p)`` with ``self == p(theta) / N`` and integer ``p``."""
        return self.den, list(self.num)


@lru_cache(maxsize=65536)
def _inverse_num(field, num):
    """Inverse of ``num(theta)`` as (integer vector, denominator)."""
    d = field.degree
    if d == 1:
        return (1,), num[0]
    if d == 2:
        # theta^2 = t1*theta + t0 ; conjugate theta' = t1 - theta
        t0, t1 = field._red[0]
        p, q = num
        norm = p * p + p * q * t1 - q * q * t0
        return (p + q * t1, -q), norm
    # multiplication matrix columns: num * theta^j
    one = FieldElement._raw(field, num, 1)
    cols = []
    e = field.one
    for _ in range(d):
        prod = one * e
        cols.append([Fraction(c, prod.den) for c in prod.num])
        e = e * field.gen
    mat = [[cols[j][i] for j in range(d)] + [Fraction(int(i == 0))] for i in range(d)]
    for col in range(d):
        piv = next(r for r in range(col, d) if mat[r][col] != 0)
        mat[col], mat[piv] = mat[piv], mat[col]
        pv = mat[col][col]
        mat[col] = [v / pv for v in mat[col]]
        for r in range(d):
            if r != col and mat[r][col] != 0:
                fac = mat[r][col]
                mat[r] = [a - fac * b for a, b in zip(mat[r], mat[col])]
    sol = [mat[i][d] for i in range(d)]
    den = 1
    for s in sol:
        den = den * s.denominator // math.gcd(den, s.denominator)
    return tuple(int(s * den) for s in sol), den


RATIONALS = NumberField([1, 0], name="q")


# ---------------------------------------------------------------------------
# quadratic extension


class QuadraticExtension:
    """``F(omega)`` with ``omega^2 = p*omega + r`` over a real number field ``F``.

    ``larger`` selects which real root of the quadratic is the distinguished
    embedding of ``omega``.  The Galois involution ``omega -> p - omega``
    fixes ``F``.
    """

    def __init__(self, base, p, r, name="omega", larger=True):
        self.base = base
        self.p = base.coerce(p)
        self.r = base.coerce(r)
        self.name = name
        self.larger = larger
        disc = self.p * self.p + 4 * self.r
        if disc.sign() <= 0:
            raise FieldError("quadratic must have two distinct real roots")
        self._disc = disc
        dis = math.sqrt(float(disc))
        self.approx = (float(self.p) + (dis if larger else -dis)) / 2
        self.zero = QuadExtElement(self, base.zero, base.zero)
        self.one = QuadExtElement(self, base.one, base.zero)

    @property
    def gen(self):
        return QuadExtElement(self, self.base.zero, self.base.one)

    def coerce(self, value):
        if isinstance(value, QuadExtElement):
            if value.ext is not self:
                raise FieldError("element belongs to a different extension")
            return value
        return QuadExtElement(self, self.base.coerce(value), self.base.zero)

    def __call__(self, lo, hi=0):
        return QuadExtElement(self, self.base.coerce(lo), self.base.coerce(hi))

    def omega_interval(self, eps):
        """Rational interval around the distinguished root."""
        eps = Fraction(eps)
        plo, phi = self.p.real_embedding(eps / 4)
        dlo, dhi = self._disc.real_embedding(eps / 4)
        k = max(8, int(-math.log2(float(eps))) + 8)
        scale = 1 << (2 * k)
        slo = Fraction(math.isqrt(math.floor(dlo * scale)), 1 << k)
        shi = Fraction(math.isqrt(math.ceil(dhi * scale)) + 1, 1 << k)
        if self.larger:
            return (plo + slo) / 2, (phi + shi) / 2
        return (plo - shi) / 2, (phi - slo) / 2


class QuadExtElement:
    """``lo + hi*omega`` in a :class:`QuadraticExtension`."""

    __slots__ = ("ext", "lo", "hi")

    def __init__(self, ext, lo, hi):
        self.ext = ext
        self.lo = lo
        self.hi = hi

    def __repr__(self):
        return f"({self.lo!r}) + ({self.hi!r})*{self.ext.name}"

    def to_json(self):
        return {"lo": self.lo.to_json(), "hi": self.hi.to_json()}

    def _coerce(self, other):
        if isinstance(other, QuadExtElement):
            if other.ext is not self.ext:
                raise FieldError("mixed-extension arithmetic")
            return other
        if isinstance(other, (int, Fraction, FieldElement)):
            return self.ext.coerce(other)
        return None

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.lo == o.lo and self.hi == o.hi

    def __hash__(self):
        return hash((self.lo, self.hi))

    def __bool__(self):
        return bool(self.lo) or bool(self.hi)

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExtElement(self.ext, self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self):
        return QuadExtElement(self.ext, -self.lo, -self.hi)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExtElement(self.ext, self.lo - o.lo, self.hi - o.hi)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b, c, d = self.lo, self.hi, o.lo, o.hi
        bd = b * d
        return QuadExtElement(self.ext, a * c + bd * self.ext.r, a * d + b * c + bd * self.ext.p)

    __rmul__ = __mul__

    def sigma(self):
        """Image under the involution ``omega -> p - omega``."""
        return QuadExtElement(self.ext, self.lo + self.hi * self.ext.p, -self.hi)

    def norm(self):
        """``self * sigma(self)``, an element of the base field."""
        prod = self * self.sigma()
        assert not prod.hi
        return prod.lo

    def inverse(self):
        n = self.norm()
        if not n:
            raise ZeroDivisionError("division by zero in quadratic extension")
        s = self.sigma()
        return QuadExtElement(self.ext, s.lo / n, s.hi / n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = self.ext.one
        for _ in range(n):
            result = result * self
        return result

    def __float__(self):
        return float(self.lo) + float(self.hi) * self.ext.approx

    def real_embedding(self, eps=Fraction(1, 10**12)):
        eps = Fraction(eps)
        h = abs(float(self.hi)) + 1
        w = abs(self.ext.approx) + 1
        sub = eps / (4 * (h + w + 1))
        llo, lhi = self.lo.real_embedding(sub)
        hlo, hhi = self.hi.real_embedding(sub)
        olo, ohi = self.ext.omega_interval(sub)
        prods = [hlo * olo, hlo * ohi, hhi * olo, hhi * ohi]
        return llo + min(prods), lhi + max(prods)

    def sign(self):
        if not self.hi:
            return self.lo.sign()
        if not self.lo:
            return self.hi.sign() * (1 if self.ext.approx > 0 else -1)
        lf, hf = float(self.lo), float(self.hi)
        s = lf + hf * self.ext.approx
        m = abs(lf) + abs(hf * self.ext.approx)
        if abs(s) > m * 1e-11:
            return 1 if s > 0 else -1
        eps = Fraction(1, 1 << 64)
        for _ in range(40):
            lo, hi = self.real_embedding(eps)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            eps = eps * eps
        raise FieldError("sign undecidable: is the quadratic reducible over the base field?")

    def floor(self):
        n = math.floor(float(self))
        while (self - n).sign() < 0:
            n -= 1
        while (self - (n + 1)).sign() >= 0:
            n += 1
        return n

    def ceil(self):
        return -((-self).floor())

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def _cmp(self, other):
        o = self._coerce(other)
        if o is None:
            return None
        return (self - o).sign()

    def __lt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c >= 0


# ---------------------------------------------------------------------------
# polynomial predicates


def is_pisot(minpoly, dps=60):
    """True iff the monic integer polynomial has one real root > 1 and all others inside the unit disc."""
    import sympy

    coeffs = [int(c) for c in minpoly]
    if coeffs[0] != 1:
        raise FieldError("polynomial must be monic")
    x = sympy.Symbol("x")
    if len(coeffs) > 2 and not sympy.Poly(coeffs, x).is_irreducible:
        raise FieldError(f"polynomial {coeffs} is reducible over Q")
    if len(coeffs) == 2:
        return -coeffs[1] > 1
    with mpmath.workdps(dps):
        roots = mpmath.polyroots([mpmath.mpf(c) for c in coeffs], maxsteps=500, extraprec=4 * dps)
        tol = mpmath.mpf(10) ** (-(dps // 2))
        big = [r for r in roots if abs(r) > 1 - tol]
        if len(big) != 1:
            return False
        r = big[0]
        return abs(mpmath.im(r)) < tol and mpmath.re(r) > 1 + tol


# ---------------------------------------------------------------------------
# expression parser


class ParseError(FieldError):
    def __init__(self, message, pos, text):
        super().__init__(f"{message} at position {pos}: {text!r}")
        self.pos = pos


def _tokenize(text):
    i = 0
    out = []
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit() or (ch == "." and i + 1 < len(text) and text[i + 1].isdigit()):
            j = i
            while j < len(text) and (text[j].isdigit() or text[j] == "."):
                j += 1
            out.append(("num", text[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            out.append(("name", text[i:j], i))
            i = j
            continue
        if ch in "+-*/^()":
            out.append(("op", ch, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", i, text)
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text, field, names):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.field = field
        self.names = names

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, tok[2], self.text)

    def parse(self):
        v = self.expr()
        if self.peek()[0] != "end":
            self.error("unexpected token")
        return v

    def expr(self):
        v = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            w = self.term()
            v = v + w if op == "+" else v - w
        return v

    def term(self):
        v = self.unary()
        while self.peek()[:2] in (("op", "*"), ("op", "/")):
            tok = self.take()
            w = self.unary()
            if tok[1] == "*":
                v = v * w
            else:
                if not w:
                    self.error("division by zero", tok)
                v = v / w
        return v

    def unary(self):
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek()[:2] == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            exp = self._int_exponent()
            if exp < 0 and not base:
                self.error("zero to a negative power")
            base = base**exp
        return base

    def _int_exponent(self):
        sign = 1
        tok = self.peek()
        paren = False
        if tok[:2] == ("op", "("):
            self.take()
            paren = True
            tok = self.peek()
        if tok[:2] == ("op", "-"):
            self.take()
            sign = -1
            tok = self.peek()
        if tok[0] != "num" or "." in tok[1]:
            self.error("exponent must be an integer literal; declare radicals through a minimal polynomial", tok)
        self.take()
        if paren:
            if self.peek()[:2] != ("op", ")"):
                self.error("exponent must be an integer literal; declare radicals through a minimal polynomial")
            self.take()
        return sign * int(tok[1])

    def atom(self):
        tok = self.take()
        kind, val, _ = tok
        if kind == "num":
            return self.field.coerce(Fraction(val))
        if kind == "name":
            if val in self.names:
                return self.names[val]
            if val == self.field.name:
                return self.field.gen
            self.error(f"symbol {val!r} is not available in this field", tok)
        if tok[:2] == ("op", "("):
            v = self.expr()
            if self.peek()[:2] != ("op", ")"):
                self.error("expected ')'")
            self.take()
            return v
        self.error("unexpected token", tok)


def parse_element(expr, field, names=None):
    """Parse an arithmetic expression over the rationals and named field elements.

    Supports ``+ - * /``, integer powers ``^``, parentheses, integer and
    decimal literals (decimals are read exactly), the field generator name
    and any extra names supplied in ``names``.
    """
    return _Parser(str(expr), field, dict(names or {})).parse()


# ---------------------------------------------------------------------------
# composite fields


def compositum(field1, field2, name="gamma"):
    """Primitive-element field containing both fields.

    Returns ``(field, image1, image2)`` where ``image_i`` is the image of the
    generator of ``field_i`` in the new field.
    """
    import sympy

    x = sympy.Symbol("x")

    def algebraic(field):
        if field.degree == 1:
            return sympy.Rational(field.rational_root.numerator, field.rational_root.denominator)
        poly = sympy.Poly(list(field.minpoly), x)
        real = poly.real_roots()
        val = field.approx
        return min(real, key=lambda r: abs(float(r) - val))

    a1, a2 = algebraic(field1), algebraic(field2)
    minpoly, coeffs, reps = sympy.primitive_element([a1, a2], x, ex=True)
    poly = sympy.Poly(minpoly, x)
    lead = poly.LC()
    if lead != 1:
        raise FieldError("primitive element is not integral")
    gamma_val = float(sum(c * a for c, a in zip(coeffs, [a1, a2])).evalf(40))
    new = NumberField([int(c) for c in poly.all_coeffs()], name=name, approx=gamma_val)
    images = []
    for rep in reps:
        rc = [Fraction(int(sympy.Rational(c).p), int(sympy.Rational(c).q)) for c in rep[::-1]]
        images.append(new.from_coeffs(rc))
    return new, images[0], images[1]
