"""Elliptic surfaces over k(t): Kodaira types, bad-fibre tables, sections,
Shioda heights, and the discriminant bookkeeping.

Base fields are Q (Fraction coefficients) or real quadratic fields embedded
in the tower (TowerElement coefficients).  All places are tame here, so the
Kodaira type is read off the valuations of (c4, c6, Delta) after
minimalisation, with the step-6 cubic consulted for I0* leg data.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .numfield import TowerElement, sqrt_in_quadratic
from .poly import Poly, QQ, RationalFunc, TOWER

__all__ = [
    "Place", "LocalFibreData", "EllipticSurface", "SectionPoint",
    "quartic_to_weierstrass", "shioda_tate_disc", "torsion_two_divisibility",
    "min_positive_height_on_grid", "trivial_lattice_disc",
]


# ---------------------------------------------------------------------------
# polynomial extras


def poly_ext_gcd(a: Poly, b: Poly):
    """(g, u, v) with u*a + v*b = g, g monic."""
    F = a.field
    r0, r1 = a, b
    s0, s1 = Poly.const(F, F.one), Poly(F, [])
    t0, t1 = Poly(F, []), Poly.const(F, F.one)
    while not r1.is_zero():
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    c = F.one / r0.lead()
    return r0 * c, s0 * c, t0 * c


# ---------------------------------------------------------------------------
# local rings k[t]/(pi^N)


class LocalRing:
    """Truncated local ring at an irreducible place pi, precision pi^N."""

    def __init__(self, pi: Poly, N: int):
        self.pi = pi
        self.N = N
        self.mod = pi ** N
        self.field = pi.field

    def red(self, p: Poly) -> Poly:
        return p % self.mod

    def from_rational(self, rf: RationalFunc) -> Poly:
        """Image of a rational function with nonnegative valuation."""
        num, den = rf.num, rf.den
        vd = den.valuation(self.pi)
        vn = num.valuation(self.pi) if not num.is_zero() else self.N
        if not num.is_zero() and vn - vd < 0:
            raise ValueError("negative valuation: not in the local ring")
        if num.is_zero():
            return Poly(self.field, [])
        for _ in range(vd):
            num = num.exact_div(self.pi)
            den = den.exact_div(self.pi)
        return self.red(self.red(num) * self.inv_unit(den))

    def inv_unit(self, u: Poly) -> Poly:
        u = self.red(u)
        g, s, _ = poly_ext_gcd(u, self.mod)
        if g.degree() != 0:
            raise ZeroDivisionError("not a unit in the local ring")
        return self.red(s * (self.field.one / g.coeffs[0]))

    def valuation(self, p: Poly) -> int:
        p = self.red(p)
        if p.is_zero():
            return self.N
        return p.valuation(self.pi)


# ---------------------------------------------------------------------------
# residue fields


def residue_is_square(c, pi: Poly, base_label: str = "QQ"):
    """Is the residue class of c a square in kappa = (base)[t]/(pi)?

    Supported: kappa = Q, Q(sqrt d), and quadratic extensions of Q; larger
    residue fields return None (undecided at the number-field level; fibre
    splitness over F_q is recomputed separately during counting).
    """
    F = pi.field
    if pi.degree() == 1:
        val = (c % pi).coeff(0) if isinstance(c, Poly) else c
        return _constant_is_square(val, base_label)
    if pi.degree() == 2 and base_label == "QQ":
        # kappa = Q[t]/(t^2 + bt + a): map to Q(sqrt D), D = b^2 - 4a
        b, a = Fraction(pi.coeffs[1]), Fraction(pi.coeffs[0])
        D = b * b - 4 * a
        if D == 0:
            return None
        cp = c if isinstance(c, Poly) else Poly.const(F, c)
        cp = cp % pi
        u, v = Fraction(cp.coeff(0)), Fraction(cp.coeff(1))
        # c = u + v*theta with theta = (-b + sqrt D)/2
        return _quad_square(u - v * b / 2, v / 2, D)
    return None


def _constant_is_square(c, base_label: str):
    if base_label == "QQ":
        q = Fraction(c)
        return q >= 0 and _is_square_fraction(q)
    if isinstance(c, TowerElement):
        co = c.co
        if any(co[i] for i in range(4, len(co))):
            return None
        if base_label == "Qsqrt5":
            if co[1] or co[3]:
                return None
            return sqrt_in_quadratic(co[0], co[2], 5) is not None
        if base_label == "Qsqrt2":
            if co[2] or co[3]:
                return None
            return sqrt_in_quadratic(co[0], co[1], 2) is not None
    return None


def _is_square_fraction(q: Fraction) -> bool:
    from math import isqrt
    q = Fraction(q)
    if q < 0:
        return False
    a, b = q.numerator, q.denominator
    ra, rb = isqrt(a), isqrt(b)
    return ra * ra == a and rb * rb == b


def _quad_square(s, t, D: Fraction):
    """Is s + t*sqrt(D) (D a positive rational non-square) a square in Q(sqrt D)?"""
    # normalize D to a squarefree integer d with sqrt(D) = r*sqrt(d)
    from math import isqrt
    D = Fraction(D)
    if D <= 0:
        return None
    n = D.numerator * D.denominator
    d = 1
    k = 2
    rest = n
    while k * k <= rest:
        while rest % (k * k) == 0:
            rest //= k * k
        k += 1
    d = rest
    r2 = D / d
    ra, rb = isqrt(r2.numerator), isqrt(r2.denominator)
    r = Fraction(ra, rb)
    assert r * r == r2
    return sqrt_in_quadratic(Fraction(s), Fraction(t) * r, d) is not None


# ---------------------------------------------------------------------------
# places and fibre data


@dataclass(frozen=True)
class Place:
    poly: object = None        # monic irreducible Poly, or None for infinity
    infinity: bool = False

    @property
    def degree(self):
        return 1 if self.infinity else self.poly.degree()

    def __repr__(self):
        return "Place(inf)" if self.infinity else f"Place({self.poly})"


CONTR_NONID = {
    "II": Fraction(0), "III": Fraction(1, 2), "IV": Fraction(2, 3),
    "I0*": Fraction(1), "IV*": Fraction(4, 3), "III*": Fraction(3, 2),
    "II*": Fraction(0),
}

COMPONENTS = {"I0": 1, "II": 1, "III": 2, "IV": 3, "I0*": 5,
              "IV*": 7, "III*": 8, "II*": 9}


@dataclass
class LocalFibreData:
    place: Place
    kodaira: str
    vc4: int
    vc6: int
    vdelta: int
    n: int = 0                 # n for I_n and I_n*
    split: object = None       # True/False/None (multiplicative only)
    legs_rational: object = None  # I0*: 1 + number of rational step-6 cubic roots
    minimal_twists: int = 0

    @property
    def components(self):
        if self.kodaira.startswith("I") and self.kodaira[1:].isdigit():
            return max(1, self.n)
        if self.kodaira.endswith("*") and self.kodaira[1:-1].isdigit():
            return 5 + self.n
        return COMPONENTS[self.kodaira]

    def __repr__(self):
        extra = "" if self.split is None else (" split" if self.split else " nonsplit")
        return f"{self.kodaira}@{self.place}{extra}"


def classify_tame(vc4, vc6, vdelta):
    """Kodaira symbol from minimal valuations, residue characteristic 0 or >= 5."""
    if vdelta == 0:
        return "I0", 0
    if vc4 == 0:
        return f"I{vdelta}", vdelta
    if vdelta == 2:
        return "II", 0
    if vdelta == 3:
        return "III", 0
    if vdelta == 4:
        return "IV", 0
    if vdelta == 6:
        return "I0*", 0
    if vc4 == 2 and vc6 == 3 and vdelta >= 7:
        return f"I{vdelta - 6}*", vdelta - 6
    if vdelta == 8:
        return "IV*", 0
    if vdelta == 9:
        return "III*", 0
    if vdelta == 10:
        return "II*", 0
    raise ValueError(f"valuations (vc4={vc4}, vc6={vc6}, vdelta={vdelta}) "
                     "match no tame Kodaira type")


# ---------------------------------------------------------------------------
# the surface


class EllipticSurface:
    """y^2 = x^3 + a2(t) x^2 + a4(t) x + a6(t) over k(t), Euler factor chi."""

    def __init__(self, fieldad, a2: Poly, a4: Poly, a6: Poly, chi: int = 2,
                 name: str = "", base_label: str | None = None):
        self.fieldad = fieldad
        self.a2, self.a4, self.a6 = a2, a4, a6
        self.chi = chi
        self.name = name
        self.base_label = base_label or ("QQ" if fieldad is QQ else "Qsqrt5")
        self._c4c6d = None
        if self.delta().is_zero():
            raise ValueError("discriminant vanishes identically")
        # effective chart weight: smallest w with deg a_i <= i*w; exceeding
        # the declared chi means the model is not globally minimal, which the
        # per-place minimalisation absorbs
        w = chi
        for ai, wt in ((a2, 2), (a4, 4), (a6, 6)):
            if not ai.is_zero():
                w = max(w, -(-ai.degree() // wt))
        self.weight = w

    def c4_c6_delta(self):
        if self._c4c6d is None:
            b2 = 4 * self.a2
            b4 = 2 * self.a4
            b6 = 4 * self.a6
            b8 = 4 * self.a2 * self.a6 - self.a4 * self.a4
            c4 = b2 * b2 - 24 * b4
            c6 = -(b2 ** 3) + 36 * b2 * b4 - 216 * b6
            delta = -(b2 * b2 * b8) - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
            if not (c4 ** 3 - c6 * c6) == delta * 1728:
                raise AssertionError("c4^3 - c6^2 != 1728*Delta")
            self._c4c6d = (c4, c6, delta)
        return self._c4c6d

    def delta(self):
        F = self.fieldad
        b2 = 4 * self.a2
        b4 = 2 * self.a4
        b6 = 4 * self.a6
        b8 = 4 * self.a2 * self.a6 - self.a4 * self.a4
        return -(b2 * b2 * b8) - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    def rhs_poly_in_x(self):
        """Coefficients [a6, a4, a2, 1] of the cubic in x (entries Poly in t)."""
        F = self.fieldad
        return [self.a6, self.a4, self.a2, Poly.const(F, F.one)]

    def infinity_model(self) -> "EllipticSurface":
        """The u = 1/t chart with (x, y) -> (x/u^{2w}, y/u^{3w})."""
        c = self.weight
        a2u = self.a2.reverse(2 * c)
        a4u = self.a4.reverse(4 * c)
        a6u = self.a6.reverse(6 * c)
        return EllipticSurface(self.fieldad, a2u, a4u, a6u, chi=c,
                               name=self.name + "@inf", base_label=self.base_label)

    # -- local analysis -------------------------------------------------------
    def _local_minimal(self, pi: Poly):
        """(a2', a4', a6', e): the model divided by pi^(2e,4e,6e) to be minimal."""
        a2, a4, a6 = self.a2, self.a4, self.a6
        e = 0
        while True:
            c4, c6, delta = EllipticSurface(self.fieldad, a2, a4, a6,
                                            chi=self.chi)._c4c6_raw()
            if delta.valuation(pi) >= 12 and c4.valuation(pi) >= 4 \
                    and c6.valuation(pi) >= 6:
                a2 = a2.exact_div(pi ** 2)
                a4 = a4.exact_div(pi ** 4)
                a6 = a6.exact_div(pi ** 6)
                e += 1
            else:
                return a2, a4, a6, e

    def _c4c6_raw(self):
        b2 = 4 * self.a2
        b4 = 2 * self.a4
        b6 = 4 * self.a6
        c4 = b2 * b2 - 24 * b4
        c6 = -(b2 ** 3) + 36 * b2 * b4 - 216 * b6
        return c4, c6, self.delta()

    def local_type(self, place: Place) -> LocalFibreData:
        surf = self.infinity_model() if place.infinity else self
        pi = Poly.x(self.fieldad) if place.infinity else place.poly
        a2, a4, a6, e = surf._local_minimal(pi)
        model = EllipticSurface(surf.fieldad, a2, a4, a6, chi=surf.chi,
                                base_label=surf.base_label) if e else surf
        c4, c6, delta = model._c4c6_raw()
        vc4 = c4.valuation(pi) if not c4.is_zero() else 10 ** 9
        vc6 = c6.valuation(pi) if not c6.is_zero() else 10 ** 9
        vd = delta.valuation(pi)
        sym, n = classify_tame(vc4, vc6, vd)
        data = LocalFibreData(place, sym, min(vc4, 12), min(vc6, 12), vd, n,
                              minimal_twists=e)
        if sym.startswith("I") and not sym.endswith("*") and n >= 1:
            data.split = model._multiplicative_split(pi, n)
        if sym == "I0*":
            data.legs_rational = model._i0star_legs(pi)
        return data

    def _multiplicative_split(self, pi: Poly, n: int):
        """Split iff the tangent-cone quadratic at the node factors over kappa."""
        x0 = self._node_residue(pi)
        if x0 is None:
            return None
        # f''(x0)/2 = 3 x0 + a2 mod pi
        c = (3 * x0 + (self.a2 % pi)) % pi
        return residue_is_square(c, pi, self.base_label)

    def _node_residue(self, pi: Poly):
        """x-coordinate (as Poly mod pi) of the node of the reduced fibre."""
        F = self.fieldad
        # f(x) = x^3 + a2 x^2 + a4 x + a6 with coefficients mod pi, in kappa[x]
        a2, a4, a6 = self.a2 % pi, self.a4 % pi, self.a6 % pi
        # work in kappa[x]: elements of kappa are Polys in t mod pi
        fx = _KPoly(pi, [a6, a4, a2, Poly.const(F, F.one)])
        dfx = fx.derivative()
        g = fx.gcd(dfx)
        if g.degree() != 1:
            return None
        # root of linear g
        lead_inv = g.kinv(g.coeffs[1])
        x0 = _kmul(pi, -1 * g.coeffs[0], lead_inv) % pi
        return x0

    def _i0star_legs(self, pi: Poly):
        """1 + number of kappa-rational roots of the step-6 cubic."""
        F = self.fieldad
        # depress: x -> x - a2/3 exactly, then P(X) = X^3 + (p/pi^2) X + (q/pi^3)
        a2, a4, a6 = self.a2, self.a4, self.a6
        s = a2 * (F.from_int(1) / F.from_int(3))
        p = a4 - a2 * s
        q = a6 - a4 * s + a2 * s * s - s * s * s
        p2 = p.exact_div(pi ** 2) % pi if not p.is_zero() else Poly(F, [])
        q3 = q.exact_div(pi ** 3) % pi if not q.is_zero() else Poly(F, [])
        cubic = _KPoly(pi, [q3, p2, Poly(F, []), Poly.const(F, F.one)])
        return 1 + cubic.count_rational_roots()

    def bad_fibres(self):
        """[(Place, LocalFibreData)] over every place; sum v(Delta) = 12 chi."""
        _, _, delta = self.c4_c6_delta()
        out = []
        for pi, mult in factor_over_base(delta, self.fieldad):
            place = Place(pi)
            data = self.local_type(place)
            if data.vdelta > 0:
                out.append((place, data))
        inf_place = Place(infinity=True)
        inf_data = self.local_type(inf_place)
        if inf_data.vdelta > 0:
            out.append((inf_place, inf_data))
        total = sum(d.vdelta * p.degree for p, d in out)
        if total != 12 * self.chi:
            raise AssertionError(f"sum of v(Delta) = {total} != {12 * self.chi}")
        return out


# ---------------------------------------------------------------------------
# kappa[x] helper: polynomials in x over kappa = k[t]/(pi)


def _kmul(pi, a, b):
    return (a * b) % pi


class _KPoly:
    """Polynomial in x with coefficients in k[t]/(pi)."""

    def __init__(self, pi: Poly, coeffs):
        self.pi = pi
        cs = [c % pi for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs = cs

    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def kinv(self, c: Poly) -> Poly:
        g, s, _ = poly_ext_gcd(c % self.pi, self.pi)
        if g.degree() != 0:
            raise ZeroDivisionError("residue not invertible")
        return (s * (self.pi.field.one / g.coeffs[0])) % self.pi

    def derivative(self):
        F = self.pi.field
        return _KPoly(self.pi, [c * F.from_int(i) for i, c in
                                enumerate(self.coeffs)][1:])

    def divmod(self, other):
        pi = self.pi
        a = [c for c in self.coeffs]
        b = other.coeffs
        binv = other.kinv(b[-1])
        if len(a) < len(b):
            return _KPoly(pi, []), self
        F = pi.field
        q = [Poly(F, []) for _ in range(len(a) - len(b) + 1)]
        for i in range(len(a) - len(b), -1, -1):
            c = _kmul(pi, a[i + len(b) - 1], binv)
            if not c.is_zero():
                q[i] = c
                for j, bj in enumerate(b):
                    a[i + j] = (a[i + j] - c * bj) % pi
        return _KPoly(pi, q), _KPoly(pi, a)

    def gcd(self, other):
        a, b = self, other
        while not b.is_zero():
            a, b = b, a.divmod(b)[1]
        if a.is_zero():
            return a
        inv = a.kinv(a.coeffs[-1])
        return _KPoly(self.pi, [_kmul(self.pi, c, inv) for c in a.coeffs])

    def count_rational_roots(self) -> int:
        """Roots in kappa, counted without multiplicity (degree <= 3 here)."""
        # try all candidate roots of the norm-form: for our uses kappa = Q or
        # Q(sqrt d); count roots of the cubic by factoring over the base
        # through resultants is overkill -- use a direct search on linear
        # factors: x - r divides iff evaluation at r vanishes; candidate r's
        # come from factoring the constant coefficient is fragile, so instead
        # use the squarefree gcd cascade:
        f = self
        count = 0
        # successive gcd with x^|kappa| - x is unavailable (infinite field);
        # factor by the cubic formula discriminant tests instead
        d = f.degree()
        if d <= 0:
            return 0
        if d == 1:
            return 1
        # normalize monic
        inv = f.kinv(f.coeffs[-1])
        cs = [_kmul(self.pi, c, inv) for c in f.coeffs]
        if d == 2:
            b, c = cs[1], cs[0]
            disc = (b * b - 4 * c) % self.pi
            sq = _kappa_is_square(disc, self.pi)
            if sq is None:
                return 0
            return 2 if sq else 0
        if d == 3:
            # rational root search via factorization of the cubic over kappa:
            # a cubic has a kappa-root iff its resolvent... keep it concrete:
            # count roots by testing the three roots of the depressed cubic
            # through the discriminant + one explicit root via rational
            # root extraction over Q / Q(sqrt d)
            return _cubic_rational_roots(cs, self.pi)
        raise NotImplementedError("root count only for degree <= 3")


def _kappa_is_square(c: Poly, pi: Poly):
    if pi.degree() == 1:
        val = c.coeff(0)
        return _constant_is_square(val, pi.field)
    return residue_is_square(c, pi)


def _cubic_rational_roots(cs, pi: Poly) -> int:
    """Number of kappa-roots of a monic cubic (kappa = Q or quadratic)."""
    F = pi.field
    if pi.degree() != 1:
        raise NotImplementedError("cubic leg data only at degree-1 places")
    b, c, d = cs[2].coeff(0), cs[1].coeff(0), cs[0].coeff(0)
    # rational roots of x^3 + bx^2 + cx + d over Q (Fraction coefficients)
    if F is QQ:
        roots = _rational_cubic_roots(Fraction(b), Fraction(c), Fraction(d))
    else:
        roots = _tower_cubic_roots(b, c, d)
    return roots


def _rational_cubic_roots(b, c, d) -> int:
    import sympy
    t = sympy.Symbol("x")
    expr = t ** 3 + sympy.Rational(b) * t ** 2 + sympy.Rational(c) * t + sympy.Rational(d)
    count = 0
    for fac, mult in sympy.factor_list(expr, t)[1]:
        if sympy.degree(fac, t) == 1:
            count += 1
    return count


def _tower_cubic_roots(b, c, d) -> int:
    import sympy
    t = sympy.Symbol("x")
    exprs = [_tower_to_sympy(v) for v in (b, c, d)]
    expr = t ** 3 + exprs[0] * t ** 2 + exprs[1] * t + exprs[2]
    ext = _sympy_extension_for([b, c, d])
    count = 0
    for fac, mult in sympy.factor_list(expr, t, extension=ext)[1]:
        if sympy.degree(fac, t) == 1:
            count += 1
    return count


# ---------------------------------------------------------------------------
# sympy bridge for factorization over Q and Q(sqrt d)


def _tower_to_sympy(c):
    import sympy
    if isinstance(c, Fraction):
        return sympy.Rational(c.numerator, c.denominator)
    if not c.in_k4():
        raise NotImplementedError("factorization base restricted to K4 subfields")
    co = c.co
    return (sympy.Rational(co[0].numerator, co[0].denominator)
            + sympy.Rational(co[1].numerator, co[1].denominator) * sympy.sqrt(2)
            + sympy.Rational(co[2].numerator, co[2].denominator) * sympy.sqrt(5)
            + sympy.Rational(co[3].numerator, co[3].denominator) * sympy.sqrt(10))


def _sympy_extension_for(consts):
    import sympy
    need2 = any(isinstance(c, TowerElement) and (c.co[1] or c.co[3]) for c in consts)
    need5 = any(isinstance(c, TowerElement) and (c.co[2] or c.co[3]) for c in consts)
    ext = []
    if need2:
        ext.append(sympy.sqrt(2))
    if need5:
        ext.append(sympy.sqrt(5))
    return ext or None


def _sympy_to_coeff(expr, fieldad):
    import sympy
    expr = sympy.expand(expr)
    if fieldad is QQ:
        r = sympy.Rational(expr)
        return Fraction(r.p, r.q)
    s2, s5 = sympy.sqrt(2), sympy.sqrt(5)
    s10 = sympy.sqrt(10)
    poly = sympy.Poly(expr, s2, s5)
    out = TowerElement.rational(0)
    for monom, coef in poly.terms():
        e2, e5 = monom
        r = sympy.Rational(coef)
        base = TowerElement.rational(Fraction(r.p, r.q))
        term = base * (TowerElement.monomial(1, 0, 0, 0) ** e2) \
            * (TowerElement.monomial(0, 1, 0, 0) ** e5)
        out = out + term
    return out


def poly_to_sympy(p: Poly, t):
    import sympy
    expr = sympy.Integer(0)
    for i, c in enumerate(p.coeffs):
        if p.field is QQ:
            expr += sympy.Rational(Fraction(c)) * t ** i
        else:
            expr += _tower_to_sympy(c) * t ** i
    return expr


def factor_over_base(p: Poly, fieldad):
    """Monic irreducible factors of p over the base field, with multiplicity."""
    import sympy
    t = sympy.Symbol("t")
    expr = poly_to_sympy(p, t)
    if fieldad is QQ:
        _, factors = sympy.factor_list(expr, t)
    else:
        ext = _sympy_extension_for(p.coeffs)
        if ext:
            _, factors = sympy.factor_list(expr, t, extension=ext)
        else:
            _, factors = sympy.factor_list(expr, t)
    out = []
    for fac, mult in factors:
        spoly = sympy.Poly(fac, t)
        if spoly.degree() == 0:
            continue
        coeffs = list(reversed(spoly.all_coeffs()))
        mine = Poly(fieldad, [_sympy_to_coeff(c, fieldad) for c in coeffs]).monic()
        out.append((mine, mult))
    out.sort(key=lambda fm: (fm[0].degree(), repr(fm[0])))
    return out


# ---------------------------------------------------------------------------
# sections and heights


class SectionPoint:
    """A section (x(t), y(t)) of an EllipticSurface, or the zero section."""

    def __init__(self, surface: EllipticSurface, x=None, y=None, zero=False):
        self.surface = surface
        self.is_zero = zero
        if zero:
            self.x = self.y = None
            return
        F = surface.fieldad
        self.x = x if isinstance(x, RationalFunc) else RationalFunc(x)
        self.y = y if isinstance(y, RationalFunc) else RationalFunc(y)
        lhs = self.y * self.y
        rhs = (self.x ** 3 + RationalFunc(surface.a2) * self.x ** 2
               + RationalFunc(surface.a4) * self.x + RationalFunc(surface.a6))
        if not (lhs - rhs).is_zero():
            raise ValueError("point does not satisfy the Weierstrass equation")

    def __neg__(self):
        if self.is_zero:
            return self
        return SectionPoint(self.surface, self.x, -self.y)

    def __eq__(self, other):
        if self.is_zero or other.is_zero:
            return self.is_zero and other.is_zero
        return (self.x - other.x).is_zero() and (self.y - other.y).is_zero()

    def __add__(self, other):
        E = self.surface
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        a2 = RationalFunc(E.a2)
        a4 = RationalFunc(E.a4)
        if (self.x - other.x).is_zero():
            if (self.y + other.y).is_zero():
                return SectionPoint(E, zero=True)
            lam = (3 * self.x * self.x + 2 * a2 * self.x + a4) / (2 * self.y)
        else:
            lam = (other.y - self.y) / (other.x - self.x)
        x3 = lam * lam - a2 - self.x - other.x
        y3 = lam * (self.x - x3) - self.y
        return SectionPoint(E, x3, y3)

    def mult(self, m: int):
        if m < 0:
            return (-self).mult(-m)
        R = SectionPoint(self.surface, zero=True)
        Q = self
        while m:
            if m & 1:
                R = R + Q
            Q = Q + Q
            m >>= 1
        return R


def _x_at_infinity(P: SectionPoint) -> RationalFunc:
    """x-coordinate of the section in the u = 1/t chart."""
    E = P.surface
    F = E.fieldad
    u = Poly.x(F)
    inv_u = RationalFunc(Poly.const(F, F.one), u)
    return P.x.subs(inv_u) * RationalFunc(u) ** (2 * E.weight)


def section_component_data(P: SectionPoint, place: Place, fib: LocalFibreData):
    """(kind, m) where kind in {'identity','cycle','nonidentity'};
    for I_n, m = min(k, n-k) identifies the unordered component pair."""
    E = P.surface
    F = E.fieldad
    if place.infinity:
        E = E.infinity_model()
        x = _x_at_infinity(P)
        pi = Poly.x(F)
    else:
        x = P.x
        pi = place.poly
    a2, a4, a6, e = E._local_minimal(pi)
    if e:
        x = x / RationalFunc(pi ** (2 * e))
    vx = x.valuation(pi)
    if vx < 0:
        return ("identity", 0)
    sym = fib.kodaira
    if sym == "I0":
        return ("identity", 0)
    N = fib.vdelta + 4
    R = LocalRing(pi, N)
    if sym.startswith("I") and not sym.endswith("*"):
        n = fib.n
        x0 = EllipticSurface(F, a2, a4, a6, chi=E.chi)._node_residue(pi)
        if x0 is None:
            raise RuntimeError("no node found at a multiplicative place")
        # Hensel-lift the critical point of f near the node
        xs = x0
        A2, A4 = R.red(a2), R.red(a4)
        for _ in range(max(3, N.bit_length() + 1)):
            fp = R.red(3 * xs * xs + 2 * A2 * xs + A4)
            fpp = R.red(6 * xs + 2 * A2)
            xs = R.red(xs - fp * R.inv_unit(fpp))
        xloc = R.from_rational(x)
        m = R.valuation(xloc - xs)
        if m == 0:
            return ("identity", 0)
        if m >= (n + 1) // 2:
            if n % 2:
                raise AssertionError("component valuation exceeds (n-1)/2 at odd I_n")
            m = n // 2
        return ("cycle", m)
    # additive: through the cusp or not
    F1 = E.fieldad
    s = a2 * (F1.one / F1.from_int(3))
    xc = -s  # exact triple-root shift
    xloc = R.from_rational(x)
    v = R.valuation(xloc - R.red(xc))
    return ("nonidentity", 1) if v >= 1 else ("identity", 0)


def local_contribution(P: SectionPoint, place: Place, fib: LocalFibreData) -> Fraction:
    kind, m = section_component_data(P, place, fib)
    if kind == "identity":
        return Fraction(0)
    if kind == "cycle":
        return Fraction(m * (fib.n - m), fib.n)
    c = CONTR_NONID.get(fib.kodaira)
    if c is None:
        raise NotImplementedError(f"correction term for {fib.kodaira} unsupported")
    if fib.kodaira == "II*" and kind == "nonidentity":
        raise AssertionError("a section cannot meet a multiple component of II*")
    return c


def section_zero_intersection(P: SectionPoint) -> int:
    """(P.O) from the pole divisor of x(P), infinity chart included."""
    E = P.surface
    F = E.fieldad
    total = 0
    den = P.x.den
    for pi, mult in factor_over_base(den, F):
        v = P.x.valuation(pi)
        if v < 0:
            total += ((-v + 1) // 2) * pi.degree()
    xu = _x_at_infinity(P)
    vu = xu.valuation(Poly.x(F))
    if vu < 0:
        total += (-vu + 1) // 2
    return total


def mw_height(E: EllipticSurface, P: SectionPoint,
              bad=None) -> Fraction:
    """Shioda height <P, P> = 2 chi + 2 (P.O) - sum of local corrections."""
    if P.is_zero:
        return Fraction(0)
    if bad is None:
        bad = E.bad_fibres()
    h = Fraction(2 * E.chi) + 2 * section_zero_intersection(P)
    for place, fib in bad:
        if fib.kodaira in ("I0", "I1", "II", "II*"):
            continue
        h -= place.degree * local_contribution(P, place, fib)
    return h


def mw_pairing(E: EllipticSurface, P: SectionPoint, Q: SectionPoint,
               bad=None) -> Fraction:
    """<P, Q> by bilinearity: (h(P+Q) - h(P) - h(Q)) / 2."""
    if bad is None:
        bad = E.bad_fibres()
    hPQ = mw_height(E, P + Q, bad)
    return (hPQ - mw_height(E, P, bad) - mw_height(E, Q, bad)) / 2


def component_index(E: EllipticSurface, P: SectionPoint, place: Place,
                    bad=None):
    """Unordered component datum of P at a bad place.

    Returns ('cycle', {k, n-k}) for I_n, ('identity', 0) for the zero
    component, ('nonidentity', 1) for simple non-identity components of
    additive fibres.
    """
    if bad is None:
        fib = E.local_type(place)
    else:
        fib = next(d for p, d in bad if p == place)
    kind, m = section_component_data(P, place, fib)
    if kind == "cycle":
        return ("cycle", frozenset({m, fib.n - m}))
    return (kind, m)


# ---------------------------------------------------------------------------
# discriminant bookkeeping


def trivial_lattice_disc(bad) -> int:
    """Determinant of U + sum of the fibre root lattices (negative definite)."""
    disc = -1
    for place, fib in bad:
        sym, n = fib.kodaira, fib.n
        if sym.startswith("I") and not sym.endswith("*"):
            if n >= 2:
                per = (-1) ** (n - 1) * n  # A_{n-1}(-1)
            else:
                continue
        elif sym == "I0*":
            per = 4            # D4(-1)
        elif sym.endswith("*") and sym[1:-1].isdigit():
            per = (-1) ** (4 + n) * 4   # D_{4+n}(-1)
        elif sym == "II*":
            per = 1            # E8(-1)
        elif sym == "III*":
            per = -2           # E7(-1)
        elif sym == "IV*":
            per = 3            # E6(-1)
        elif sym in ("II", "I0", "I1"):
            continue
        elif sym == "III":
            per = -2
        elif sym == "IV":
            per = 3
        else:
            raise NotImplementedError(sym)
        disc *= per ** place.degree
    return disc


def shioda_tate_disc(r: int, disc_triv: int, disc_mw: Fraction,
                     tors_order: int) -> Fraction:
    """disc NS = (-1)^r * disc Triv * disc MW / |tors|^2."""
    if tors_order == 0:
        raise ValueError("torsion order must be positive")
    return Fraction((-1) ** r) * disc_triv * Fraction(disc_mw) / tors_order ** 2


def torsion_two_divisibility(E: EllipticSurface, T: SectionPoint) -> dict:
    """Is the 2-torsion point (0, 0) divisible by 2 over the closed base?

    For y^2 = x^3 + a2 x^2 + a4 x with T = (0,0): halving T needs a root of
    x^2 - a4(t), so T is 2-divisible iff a4 is a square in k̄(t), i.e. iff
    every irreducible factor of a4 has even multiplicity.
    """
    if T.is_zero or not T.x.is_zero() or not T.y.is_zero():
        raise ValueError("expected the 2-torsion point (0, 0)")
    if not E.a6.is_zero():
        raise ValueError("model must have a6 = 0 for the (0,0) torsion test")
    kernel = Poly.const(E.fieldad, E.fieldad.one)
    for fac, mult in E.a4.squarefree_decomposition():
        if mult % 2:
            kernel = kernel * fac
    divisible = kernel.degree() == 0
    return {"two_divisible": divisible, "squarefree_part": kernel}


def min_positive_height_on_grid(bad, chi: int = 2) -> Fraction:
    """Minimum positive value of 2 chi - sum of correction terms over the
    grid of allowed per-fibre correction values (P.O = 0)."""
    menus = []
    for place, fib in bad:
        sym, n = fib.kodaira, fib.n
        if sym.startswith("I") and sym[1:].isdigit() and n >= 2:
            menu = sorted({Fraction(k * (n - k), n) for k in range(n)})
        elif sym in CONTR_NONID and sym not in ("II", "II*"):
            menu = [Fraction(0), CONTR_NONID[sym]]
        else:
            continue
        for _ in range(place.degree):
            menus.append(menu)
    best = None
    totals = {Fraction(0)}
    for menu in menus:
        totals = {t + m for t in totals for m in menu}
    for t in totals:
        h = Fraction(2 * chi) - t
        if h > 0 and (best is None or h < best):
            best = h
    return best


# ---------------------------------------------------------------------------
# quartic models


def quartic_to_weierstrass(coeffs, fieldad, chi: int = 2, name: str = ""):
    """Jacobian of Y^2 = quartic(X) with polynomial coefficients over k(s).

    coeffs = [e, d, c, b, a] low-to-high in X (a = leading).  Uses the
    classical binary-quartic invariants I, J; the result y^2 = x^3 - 27I x
    - 27J has the same j-invariant, and is isomorphic to the quartic curve
    whenever the quartic has a rational point (monic case: at infinity).
    """
    e, d, c, b, a = coeffs
    I = 12 * a * e - 3 * b * d + c * c
    J = 72 * a * c * e + 9 * b * c * d - 27 * a * d * d - 27 * b * b * e - 2 * c ** 3
    zero = Poly(fieldad, [])
    a4 = -27 * I
    a6 = -27 * J
    return EllipticSurface(fieldad, zero, a4, a6, chi=chi, name=name,
                           base_label="QQ" if fieldad is QQ else "Qsqrt5")


# ---------------------------------------------------------------------------
# genus-1 quartics analysed through the t = s^2 base change


_CANONICAL_VALS = {
    "II": (1, 1, 2), "III": (1, 2, 3), "IV": (2, 2, 4), "I0*": (2, 3, 6),
    "IV*": (3, 4, 8), "III*": (3, 5, 9), "II*": (4, 5, 10),
}


def compose_t_squared(p: Poly) -> Poly:
    """p(s^2) as a polynomial in s."""
    F = p.field
    out = [F.zero] * (2 * p.degree() + 1) if not p.is_zero() else []
    for i, c in enumerate(p.coeffs):
        out[2 * i] = c
    return Poly(F, out)


def ramified_double_image(sym: str, n: int = 0) -> str:
    """Kodaira type of the pullback of a fibre under a double cover
    ramified at the place (valuations double, then minimalise)."""
    if sym == "I0":
        return "I0"
    if sym.startswith("I") and not sym.endswith("*") and sym[1:].isdigit():
        return f"I{2 * int(sym[1:])}"
    if sym.endswith("*") and sym[1:-1].isdigit():
        k = int(sym[1:-1])
        return "I0" if k == 0 else f"I{2 * k}"
    a, b, d = _CANONICAL_VALS[sym]
    a, b, d = 2 * a, 2 * b, 2 * d
    while a >= 4 and b >= 6 and d >= 12:
        a, b, d = a - 4, b - 6, d - 12
    return classify_tame(a if a else 0, b, d)[0]


def ramified_double_preimages(sym_s: str):
    """All downstairs types whose ramified double-cover pullback is sym_s."""
    cands = []
    for sym in list(_CANONICAL_VALS) + ["I0*", "I0"]:
        if ramified_double_image(sym) == sym_s and sym not in cands:
            cands.append(sym)
    # multiplicative upstairs of even order come from I_{n/2} or I_{n/2}*
    if sym_s.startswith("I") and not sym_s.endswith("*") and sym_s[1:].isdigit():
        k = int(sym_s[1:])
        if k % 2 == 0:
            cands.extend([f"I{k // 2}", f"I{k // 2}*"] if k else ["I0*", "I0"])
    return cands


def analyze_quartic_double_cover(quartic_coeffs, fieldad=TOWER, chi: int = 2):
    """Bad-fibre table in the t-line for ty^2 = quartic(x; t).

    The t = s^2 substitution turns the genus-1 quartic into a Weierstrass
    model over k(s) (Jacobian of a monic quartic); places away from
    {0, inf} transfer verbatim, and the types over t = 0, inf are solved
    from their pullback types together with the Euler-number budget 12 chi.
    """
    s_coeffs = [compose_t_squared(q) for q in quartic_coeffs]
    jac = quartic_to_weierstrass(s_coeffs, fieldad, chi=chi, name="quartic@s")
    bad_s = jac.bad_fibres()
    F = fieldad
    t_entries = []
    v_known = 0
    sym0 = syminf = None
    middle_types = []
    for place, fib in bad_s:
        if place.infinity:
            syminf = fib
        elif place.poly == Poly.x(F):
            sym0 = fib
        else:
            middle_types.append((place.poly, fib))
    # places away from 0, inf pair up under s -> -s: their product is a
    # polynomial in s^2, which is the t-locus
    prod = Poly.const(F, F.one)
    for pl, fib in middle_types:
        prod = prod * pl
    if any(not F.is_zero(c) for i, c in enumerate(prod.coeffs) if i % 2):
        raise AssertionError("middle places are not symmetric in s -> -s")
    t_locus = Poly(F, prod.coeffs[0::2])
    for pi_t, mult in factor_over_base(t_locus, F):
        pi_s = compose_t_squared(pi_t)
        v = None
        for pl, fib in middle_types:
            if (pi_s % pl).is_zero():
                v = fib
                break
        if v is None:
            raise AssertionError("t-locus factor lost its s-representative")
        t_entries.append((Place(pi_t), v.kodaira, v.n))
        v_known += v.vdelta * pi_t.degree()
    budget = 12 * chi - v_known
    cands0 = ramified_double_preimages(sym0.kodaira)
    candsinf = ramified_double_preimages(syminf.kodaira)
    solutions = []
    for c0 in cands0:
        for ci in candsinf:
            v0 = _vdelta_of(c0)
            vi = _vdelta_of(ci)
            if v0 + vi == budget:
                solutions.append((c0, ci))
    if len(solutions) != 1:
        raise AssertionError(f"Euler budget does not pin the ramified types: "
                             f"{solutions}")
    c0, ci = solutions[0]
    report = [(Place(Poly.x(F)), c0, 0), (Place(infinity=True), ci, 0)] + t_entries
    total = sum(_vdelta_of(sym) * pl.degree for pl, sym, _n in report)
    return {"s_model": jac, "s_table": bad_s, "t_table": report,
            "t_locus": t_locus.monic(), "total_vdelta": total}


def _vdelta_of(sym: str) -> int:
    if sym == "I0":
        return 0
    if sym.startswith("I") and not sym.endswith("*") and sym[1:].isdigit():
        return int(sym[1:])
    if sym.endswith("*") and sym[1:-1].isdigit():
        return 6 + int(sym[1:-1])
    return _CANONICAL_VALS[sym][2]


def reduce_fiber(E: EllipticSurface, t0, field, emb=None):
    """Coefficient-wise reduction of the fibre over t0 in F_q.

    Returns (curve, bad) with curve a CurveOverFq when the fibre is smooth
    (bad = False), or (None, True) at a bad place.  Tower-coefficient models
    need a SplitEmbedding covering their generators; denominators must be
    prime to p.
    """
    from .elliptic import CurveOverFq
    from .numfield import TowerElement, reduce_mod_p
    p = field.p

    def red_coeff(c):
        if isinstance(c, TowerElement):
            if emb is None:
                raise ValueError("tower coefficients need an embedding")
            return field.from_int(reduce_mod_p(c, emb))
        c = Fraction(c)
        if c.denominator % p == 0:
            raise ValueError(f"denominator divisible by p = {p}")
        return field.from_int(c.numerator * pow(c.denominator, p - 2, p))

    def evalp(poly):
        acc = field.zero
        for c in reversed(poly.coeffs):
            acc = field.add(field.mul(acc, t0), red_coeff(c))
        return acc

    A2, A4, A6 = evalp(E.a2), evalp(E.a4), evalp(E.a6)
    try:
        return CurveOverFq(field, A2, A4, A6), False
    except ValueError:
        return None, True
