"""Dense univariate polynomials and rational functions over an exact field.

Coefficients are operator-capable exact objects (Fraction or TowerElement);
the small field adapters below supply the constants.  Everything here is
exact; polynomial gcds make intermediate results monic to control growth.
"""

from __future__ import annotations

from fractions import Fraction

from .numfield import TowerElement


class _FractionField:
    name = "QQ"
    zero = Fraction(0)
    one = Fraction(1)

    @staticmethod
    def from_int(n):
        return Fraction(n)

    @staticmethod
    def is_zero(x):
        return x == 0


class _TowerCoeffField:
    name = "tower"
    zero = TowerElement.rational(0)
    one = TowerElement.rational(1)

    @staticmethod
    def from_int(n):
        return TowerElement.rational(n)

    @staticmethod
    def is_zero(x):
        return x.is_zero()


QQ = _FractionField()
TOWER = _TowerCoeffField()


class Poly:
    """coeffs low-to-high, no trailing zeros."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        self.field = field
        cs = list(coeffs)
        while cs and field.is_zero(cs[-1]):
            cs.pop()
        self.coeffs = cs

    @classmethod
    def const(cls, field, c):
        return cls(field, [c])

    @classmethod
    def from_ints(cls, field, ints):
        return cls(field, [field.from_int(c) for c in ints])

    @classmethod
    def x(cls, field):
        return cls(field, [field.zero, field.one])

    # -- basics ---------------------------------------------------------------
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def lead(self):
        if self.is_zero():
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.field.zero

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        return self.coeffs == Poly.const(self.field, self._lift(other)).coeffs

    def _lift(self, c):
        if isinstance(c, int):
            return self.field.from_int(c)
        return c

    def __repr__(self):
        if self.is_zero():
            return "Poly(0)"
        return "Poly(" + " + ".join(f"({c})*t^{i}" for i, c in enumerate(self.coeffs)
                                    if not self.field.is_zero(c)) + ")"

    def __call__(self, x):
        acc = self.field.zero if not isinstance(x, Poly) else Poly(self.field, [])
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    # -- arithmetic -------------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(self.field, self._lift(other))
        n = max(len(self.coeffs), len(other.coeffs))
        out = [self.field.zero] * n
        for i, c in enumerate(self.coeffs):
            out[i] = out[i] + c
        for i, c in enumerate(other.coeffs):
            out[i] = out[i] + c
        return Poly(self.field, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.field, [-c for c in self.coeffs])

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(self.field, self._lift(other))
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = self._lift(other)
            return Poly(self.field, [a * c for a in self.coeffs])
        if self.is_zero() or other.is_zero():
            return Poly(self.field, [])
        F = self.field
        out = [F.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not F.is_zero(a):
                for j, b in enumerate(other.coeffs):
                    out[i + j] = out[i + j] + a * b
        return Poly(F, out)

    __rmul__ = __mul__

    def __pow__(self, e):
        r = Poly.const(self.field, self.field.one)
        b = self
        while e:
            if e & 1:
                r = r * b
            b = b * b
            e >>= 1
        return r

    def divmod(self, other):
        F = self.field
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        a = list(self.coeffs)
        b = other.coeffs
        if len(a) < len(b):
            return Poly(F, []), self
        q = [F.zero] * (len(a) - len(b) + 1)
        for i in range(len(a) - len(b), -1, -1):
            c = a[i + len(b) - 1] / b[-1]
            if not F.is_zero(c):
                q[i] = c
                for j, bj in enumerate(b):
                    a[i + j] = a[i + j] - c * bj
        return Poly(F, q), Poly(F, a)

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def exact_div(self, other):
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ValueError("division is not exact")
        return q

    def monic(self):
        if self.is_zero():
            return self
        li = self.field.one / self.lead()
        return self * li

    def gcd(self, other):
        a, b = self, other
        while not b.is_zero():
            a, b = b, (a % b)
            if not b.is_zero():
                b = b.monic()
        return a.monic() if not a.is_zero() else a

    def derivative(self):
        F = self.field
        return Poly(F, [c * F.from_int(i) for i, c in enumerate(self.coeffs)][1:])

    # -- structure ---------------------------------------------------------------
    def valuation(self, pi: "Poly") -> int:
        """Multiplicity of the irreducible pi in self (inf for the zero poly)."""
        if self.is_zero():
            return float("inf")
        v, cur = 0, self
        while True:
            q, r = cur.divmod(pi)
            if not r.is_zero():
                return v
            v, cur = v + 1, q

    def shift(self, c):
        """p(t + c)."""
        F = self.field
        t_plus_c = Poly(F, [self._lift(c), F.one])
        acc = Poly(F, [])
        for co in reversed(self.coeffs):
            acc = acc * t_plus_c + Poly.const(F, co)
        return acc

    def reverse(self, n: int | None = None):
        """u^n * p(1/u) for n >= deg p (default n = deg p)."""
        if self.is_zero():
            return self
        d = self.degree()
        if n is None:
            n = d
        if n < d:
            raise ValueError("reversal order below degree")
        F = self.field
        out = [F.zero] * (n + 1)
        for i, c in enumerate(self.coeffs):
            out[n - i] = c
        return Poly(F, out)

    def squarefree_part(self):
        if self.is_zero():
            return self
        g = self.gcd(self.derivative())
        if g.degree() <= 0:
            return self.monic()
        return self.exact_div(g * (self.field.one / g.lead())).monic()

    def squarefree_decomposition(self):
        """[(factor, multiplicity)] by Yun's algorithm (char 0)."""
        F = self.field
        p = self.monic()
        out = []
        if p.degree() <= 0:
            return out
        g = p.gcd(p.derivative())
        w = p.exact_div(g)
        i = 1
        while w.degree() > 0:
            y = w.gcd(g)
            fac = w.exact_div(y)
            if fac.degree() > 0:
                out.append((fac, i))
            w, g = y, g.exact_div(y)
            i += 1
        return out


class RationalFunc:
    """num/den over the same field, gcd-reduced, den monic."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None, reduce=True):
        if den is None:
            den = Poly.const(num.field, num.field.one)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if reduce and not num.is_zero():
            g = num.gcd(den)
            if g.degree() > 0:
                num, den = num.exact_div(g), den.exact_div(g)
        if num.is_zero():
            den = Poly.const(num.field, num.field.one)
        else:
            lead = den.lead()
            if not den.field.is_zero(lead - den.field.one):
                inv = den.field.one / lead
                num, den = num * inv, den * inv
        self.num, self.den = num, den

    @classmethod
    def from_poly(cls, p: Poly):
        return cls(p)

    @property
    def field(self):
        return self.num.field

    def is_zero(self):
        return self.num.is_zero()

    def __eq__(self, other):
        if isinstance(other, Poly):
            other = RationalFunc(other)
        if not isinstance(other, RationalFunc):
            other = RationalFunc(Poly.const(self.field, self.num._lift(other)))
        return (self.num * other.den) == (other.num * self.den)

    def __repr__(self):
        return f"({self.num})/({self.den})"

    def _coerce(self, other):
        if isinstance(other, RationalFunc):
            return other
        if isinstance(other, Poly):
            return RationalFunc(other)
        return RationalFunc(Poly.const(self.field, self.num._lift(other)))

    def __add__(self, other):
        o = self._coerce(other)
        return RationalFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunc(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        return RationalFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.is_zero():
            raise ZeroDivisionError
        return RationalFunc(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, e):
        if e < 0:
            return (1 / self) ** (-e)
        r = RationalFunc(Poly.const(self.field, self.field.one))
        b = self
        while e:
            if e & 1:
                r = r * b
            b = b * b
            e >>= 1
        return r

    def valuation(self, pi: Poly):
        if self.is_zero():
            return float("inf")
        return self.num.valuation(pi) - self.den.valuation(pi)

    def subs(self, other: "RationalFunc") -> "RationalFunc":
        """self(other(t)) for a rational-function substitution."""
        num = RationalFunc(Poly(self.field, []))
        for c in reversed(self.num.coeffs):
            num = num * other + RationalFunc(Poly.const(self.field, c))
        den = RationalFunc(Poly(self.field, []))
        for c in reversed(self.den.coeffs):
            den = den * other + RationalFunc(Poly.const(self.field, c))
        return num / den


def poly_from_tower_consts(field, consts) -> Poly:
    """Poly over the tower adapter from a low-to-high list of TowerElements."""
    return Poly(field, list(consts))
