"""Point counts on the double sextic and through the elliptic fibration.

Two independent routes to |S(F_q)|:

  * count_smooth: character sum over P^2 for the singular double cover
    w^2 = f6, plus q * 14 for the exceptional curves of the five rational
    A-type singularities;
  * count_via_fibration: sum of fibre counts of the second elliptic
    fibration, good fibres by character sums, bad fibres by the
    minimal-model fibre table (component count and rationality recomputed
    over F_q at each rational bad point).

The kernels use numpy int64 arrays; all arithmetic stays far below the
int64 overflow bound for the admissible q.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .ffield import ExtField, FqPoly, build_extension, find_roots, kronecker
from .fixtures import SurfaceFixture, load_surface
from .poly import Poly, QQ
from .tate import EllipticSurface, classify_tame

_VEC_Q_LIMIT = 1 << 21   # q^2 must stay below 2^63 in intermediate products


@dataclass
class SurfaceCount:
    q: int
    raw: int
    correction: int
    smooth: int

    def __post_init__(self):
        if self.smooth != self.raw + self.correction:
            raise ValueError("smooth != raw + correction")


# ---------------------------------------------------------------------------
# quadratic character tables


def chi_table(p: int) -> np.ndarray:
    t = np.full(p, -1, dtype=np.int64)
    sq = (np.arange(p, dtype=np.int64) ** 2) % p
    t[sq] = 1
    t[0] = 0
    return t


def _nonresidue(p: int) -> int:
    r = 2
    while kronecker(r, p) != -1:
        r += 1
    return r


# ---------------------------------------------------------------------------
# counting the double sextic


def _check_good_prime(fix: SurfaceFixture, p: int):
    if p in fix.bad_primes:
        raise ValueError(f"p = {p} is a bad-reduction prime for {fix.name}")


def count_singular(fix: SurfaceFixture, field: ExtField) -> int:
    """sum over P^2(F_q) of (1 + chi(f6)), chi(0) = 0.

    P^2(F_q) is traversed as the charts z = 1, (x : 1 : 0), (1 : 0 : 0).
    """
    _check_good_prime(fix, field.p)
    if field.n <= 2 and field.q <= _VEC_Q_LIMIT:
        return _count_singular_np(fix, field)
    return _count_singular_scalar(fix, field)


def _count_singular_scalar(fix: SurfaceFixture, field: ExtField) -> int:
    F = field
    mono = [(e, c % F.p) for e, c in fix.monomials]
    total = 0

    def fval(x, y, z):
        acc = F.zero
        for (a, b, cdeg), coef in mono:
            term = F.smul(coef, F.mul(F.mul(F.pow(x, a), F.pow(y, b)), F.pow(z, cdeg)))
            acc = F.add(acc, term)
        return acc

    one = F.one
    for x in F.elements():
        for y in F.elements():
            total += 1 + F.chi(fval(x, y, one))
    for x in F.elements():
        total += 1 + F.chi(fval(x, one, F.zero))
    total += 1 + F.chi(fval(one, F.zero, F.zero))
    return total


def _count_singular_np(fix: SurfaceFixture, field: ExtField) -> int:
    p = field.p
    chi_p = chi_table(p)
    if field.n == 1:
        return _count_singular_np_fp(fix, p, chi_p)
    return _count_singular_np_fp2(fix, field, chi_p)


def _sextic_y_coeffs(fix: SurfaceFixture):
    """f(x, y, z) organized as y-power -> [(x_exp, z_exp, coef)]."""
    by_y = {}
    for (a, b, c), coef in fix.monomials:
        by_y.setdefault(b, []).append((a, c, coef))
    return by_y


def _count_singular_np_fp(fix, p, chi_p) -> int:
    by_y = _sextic_y_coeffs(fix)
    ymax = max(by_y)
    xs = np.arange(p, dtype=np.int64)
    total = 0
    # chart z = 1: for each x, Horner in y over the vector of y values
    xpow = {a: np.ones(p, dtype=np.int64) for a in range(7)}
    for a in range(1, 7):
        xpow[a] = xpow[a - 1] * xs % p
    coeffs = []
    for b in range(ymax + 1):
        cvec = np.zeros(p, dtype=np.int64)
        for a, c, coef in by_y.get(b, []):
            cvec = (cvec + (coef % p) * xpow[a]) % p
        coeffs.append(cvec)
    ys = xs
    for i in range(p):
        acc = np.zeros(p, dtype=np.int64)
        for b in range(ymax, -1, -1):
            acc = (acc * ys[i] + coeffs[b]) % p
        # acc[j] = f(x_j, y_i, 1)
        total += p + int(chi_p[acc].sum())
    # chart (x : 1 : 0)
    accl = np.zeros(p, dtype=np.int64)
    for (a, b, c), coef in sorted(fix.monomials, key=lambda mc: -mc[0][0]):
        if c == 0:
            accl = (accl + (coef % p) * xpow[a] * 1) % p
    total += p + int(chi_p[accl % p].sum())
    # point (1 : 0 : 0)
    v = 0
    for (a, b, c), coef in fix.monomials:
        if b == 0 and c == 0:
            v = (v + coef) % p
    total += 1 + int(chi_p[v % p])
    return total


def _pair_mul(a0, a1, b0, b1, r, p):
    return (a0 * b0 + r * (a1 * b1)) % p, (a0 * b1 + a1 * b0) % p


def _count_singular_np_fp2(fix, field: ExtField, chi_p) -> int:
    """F_{p^2} as F_p[theta]/(theta^2 - r), chi via the norm map."""
    p = field.p
    r = _nonresidue(p)
    q = p * p
    by_y = _sextic_y_coeffs(fix)
    ymax = max(by_y)
    # all field elements as pairs
    e0 = np.tile(np.arange(p, dtype=np.int64), p)
    e1 = np.repeat(np.arange(p, dtype=np.int64), p)
    total = 0
    # chart z = 1: loop over x (scalar pairs), vectorize over y
    xs = [(i % p, i // p) for i in range(q)]
    # precompute x powers per x on the fly (scalar)
    for x0, x1 in xs:
        # coefficients of f(x, y, 1) as polynomial in y (pairs)
        cs = []
        xp0, xp1 = 1, 0
        xpows = {0: (1, 0)}
        for a in range(1, 7):
            xp0, xp1 = (xp0 * x0 + r * xp1 * x1) % p, (xp0 * x1 + xp1 * x0) % p
            xpows[a] = (xp0, xp1)
        for b in range(ymax + 1):
            c0 = c1 = 0
            for a, c, coef in by_y.get(b, []):
                pa0, pa1 = xpows[a]
                c0 = (c0 + coef * pa0) % p
                c1 = (c1 + coef * pa1) % p
            cs.append((c0, c1))
        acc0 = np.zeros(q, dtype=np.int64)
        acc1 = np.zeros(q, dtype=np.int64)
        for b in range(ymax, -1, -1):
            acc0, acc1 = _pair_mul(acc0, acc1, e0, e1, r, p)
            acc0 = (acc0 + cs[b][0]) % p
            acc1 = (acc1 + cs[b][1]) % p
        norm = (acc0 * acc0 - r * (acc1 * acc1)) % p
        total += q + int(chi_p[norm].sum())
    # chart (x : 1 : 0): f(x, 1, 0) over all x pairs
    acc0 = np.zeros(q, dtype=np.int64)
    acc1 = np.zeros(q, dtype=np.int64)
    line = {}
    for (a, b, c), coef in fix.monomials:
        if c == 0:
            line[a] = (line.get(a, 0) + coef) % p
    amax = max(line) if line else 0
    for a in range(amax, -1, -1):
        acc0, acc1 = _pair_mul(acc0, acc1, e0, e1, r, p)
        acc0 = (acc0 + line.get(a, 0)) % p
    norm = (acc0 * acc0 - r * (acc1 * acc1)) % p
    total += q + int(chi_p[norm].sum())
    # point (1 : 0 : 0)
    v = 0
    for (a, b, c), coef in fix.monomials:
        if b == 0 and c == 0:
            v = (v + coef) % p
    total += 1 + int(chi_p[v % p])
    return total


def count_smooth(fix: SurfaceFixture, field: ExtField) -> SurfaceCount:
    """Singular count plus q per exceptional curve of the resolution."""
    for entry in fix.profile:
        if not entry["rational_exceptional"]:
            raise NotImplementedError("non-rational exceptional profiles "
                                      "are not supported")
        _assert_point_singular(fix, entry["point"], field.p)
    raw = count_singular(fix, field)
    corr = field.q * fix.correction_sum
    return SurfaceCount(field.q, raw, corr, raw + corr)


def _assert_point_singular(fix, point, p: int):
    """The profile point must lie on the sextic mod p."""
    x, y, z = (Fraction(c) for c in point)
    val = 0
    for (a, b, c), coef in fix.monomials:
        val += Fraction(coef) * x ** a * y ** b * z ** c
    num = val.numerator
    if num % p != 0 and val != 0:
        raise ValueError("profile point does not lie on the branch sextic")
    if val != 0:
        raise ValueError("profile point is not singular on the sextic")


# ---------------------------------------------------------------------------
# fibration-side counting


def _poly_mod_p(poly: Poly, p: int):
    out = []
    for c in poly.coeffs:
        c = Fraction(c)
        if c.denominator % p == 0:
            raise ValueError(f"coefficient denominator divisible by {p}")
        out.append(c.numerator * pow(c.denominator, p - 2, p) % p)
    while out and out[-1] == 0:
        out.pop()
    return out


def bad_fiber_points(field: ExtField, a2: FqPoly, a4: FqPoly, a6: FqPoly) -> int:
    """F_q-points of the minimal regular fibre over t = 0.

    The coefficient polynomials are localized at the place t; the Kodaira
    type, splitness, and component rationality are recomputed over F_q.
    """
    F = field
    q = F.q
    t = FqPoly(F, [F.zero, F.one])

    def val(fp: FqPoly) -> int:
        if fp.is_zero():
            return 10 ** 9
        v = 0
        while fp.coeffs[v] == F.zero:
            v += 1
        return v

    while True:
        b2 = a2.scale(4)
        b4 = a4.scale(2)
        b6 = a6.scale(4)
        b8 = (a2 * a6).scale(4) - a4 * a4
        c4 = b2 * b2 - b4.scale(24)
        c6 = b4 * b2.scale(36) - b2 * b2 * b2 - b6.scale(216)
        delta = (b2 * b4 * b6).scale(9) - b2 * b2 * b8 \
            - (b4 * b4 * b4).scale(8) - (b6 * b6).scale(27)
        vd, vc4, vc6 = val(delta), val(c4), val(c6)
        if vd >= 12 and vc4 >= 4 and vc6 >= 6:
            a2 = a2.shift_down(2)
            a4 = a4.shift_down(4)
            a6 = a6.shift_down(6)
            continue
        break
    sym, n = classify_tame(vc4, vc6, vd)
    if sym == "I0":
        raise ValueError("fibre is smooth after minimalisation")
    if sym.startswith("I") and sym[1:].isdigit():
        # node of the reduced fibre
        A2, A4, A6 = a2.coeff0(), a4.coeff0(), a6.coeff0()
        fbar = FqPoly(F, [A6, A4, A2, F.one])
        dbar = FqPoly(F, [A4, F.smul(2, A2), F.from_int(3)])
        g = fbar.gcd(dbar)
        if g.degree() != 1:
            raise AssertionError("multiplicative fibre without a unique node")
        x0 = F.neg(F.mul(g.coeffs[0], F.inv(g.coeffs[1])))
        tangent = F.add(F.smul(3, x0), A2)
        split = F.chi(tangent) == 1
        if n == 1:
            return q if split else q + 2
        if split:
            return n * q
        return 2 + 2 * q if n % 2 == 0 else 2 + q
    if sym == "I0*":
        # legs from the step-6 cubic after the exact depression x -> x - a2/3
        inv3 = F.inv(F.from_int(3))
        s_poly = a2.scale_elt(inv3)
        pmid = a4 - a2 * s_poly
        qlow = a6 - a4 * s_poly + a2 * s_poly * s_poly \
            - s_poly * s_poly * s_poly
        p2 = pmid.shift_down(2).coeff0() if not pmid.is_zero() else F.zero
        q3 = qlow.shift_down(3).coeff0() if not qlow.is_zero() else F.zero
        cubic = FqPoly(F, [q3, p2, F.zero, F.one])
        roots = find_roots(cubic, F) if not cubic.is_zero() else set()
        return 1 + q * (2 + len(roots))
    if sym == "II":
        return q + 1
    if sym == "III":
        # identity plus a unique second component: both rational
        return 1 + 2 * q
    if sym == "IV":
        # split iff a6/pi^2 is a square after depressing the cubic
        inv3 = F.inv(F.from_int(3))
        s_poly = a2.scale_elt(inv3)
        qlow = a6 - a4 * s_poly + a2 * s_poly * s_poly - s_poly * s_poly * s_poly
        q2 = qlow.shift_down(2).coeff0() if not qlow.is_zero() else F.zero
        return 1 + 3 * q if F.chi(q2) == 1 else 1 + q
    if sym == "II*":
        return 1 + 9 * q
    if sym == "III*":
        # the only simple component besides the identity is unique, so the
        # arm-swap symmetry cannot act: all 8 components rational
        return 1 + 8 * q
    if sym == "IV*":
        # the two non-identity simple arm ends are swapped unless a6/pi^4 is
        # a square (Tate step 8) after depressing the cubic
        inv3 = F.inv(F.from_int(3))
        s_poly = a2.scale_elt(inv3)
        qlow = a6 - a4 * s_poly + a2 * s_poly * s_poly - s_poly * s_poly * s_poly
        q4 = qlow.shift_down(4).coeff0() if not qlow.is_zero() else F.zero
        return 1 + 7 * q if F.chi(q4) == 1 else 1 + 3 * q
    raise NotImplementedError(f"fibre counting for type {sym} not implemented")


def count_via_fibration(surface: EllipticSurface, field: ExtField) -> int:
    """|S(F_q)| as good-fibre character sums plus bad-fibre table counts."""
    if surface.fieldad is not QQ:
        raise NotImplementedError("fibration counting needs Q coefficients")
    p = field.p
    a2 = _poly_mod_p(surface.a2, p)
    a4 = _poly_mod_p(surface.a4, p)
    a6 = _poly_mod_p(surface.a6, p)
    inf = surface.infinity_model()
    a2u = _poly_mod_p(inf.a2, p)
    a4u = _poly_mod_p(inf.a4, p)
    a6u = _poly_mod_p(inf.a6, p)
    if field.n <= 2 and field.q <= _VEC_Q_LIMIT:
        good, bad_ts = _fibration_good_np(field, a2, a4, a6)
    else:
        good, bad_ts = _fibration_good_scalar(field, a2, a4, a6)
    total = good
    for t0 in bad_ts:
        sa2 = _shifted_fqpoly(field, a2, t0)
        sa4 = _shifted_fqpoly(field, a4, t0)
        sa6 = _shifted_fqpoly(field, a6, t0)
        total += bad_fiber_points(field, sa2, sa4, sa6)
    # fibre at infinity
    ua2 = _shifted_fqpoly(field, a2u, None)
    ua4 = _shifted_fqpoly(field, a4u, None)
    ua6 = _shifted_fqpoly(field, a6u, None)
    ddel = _delta0(field, ua2, ua4, ua6)
    if ddel != field.zero:
        total += _good_fiber_count_scalar(field, ua2.coeff0(), ua4.coeff0(),
                                          ua6.coeff0())
    else:
        total += bad_fiber_points(field, ua2, ua4, ua6)
    return total


def _delta0(field, a2, a4, a6):
    from .elliptic import CurveOverFq
    F = field
    A2, A4, A6 = a2.coeff0(), a4.coeff0(), a6.coeff0()
    b2 = F.smul(4, A2)
    b4 = F.smul(2, A4)
    b6 = F.smul(4, A6)
    b8 = F.sub(F.smul(4, F.mul(A2, A6)), F.mul(A4, A4))
    t1 = F.mul(F.mul(b2, b2), b8)
    t2 = F.smul(8, F.mul(F.mul(b4, b4), b4))
    t3 = F.smul(27, F.mul(b6, b6))
    t4 = F.smul(9, F.mul(b2, F.mul(b4, b6)))
    return F.sub(F.sub(F.sub(t4, t1), t2), t3)


def _good_fiber_count_scalar(field, A2, A4, A6) -> int:
    F = field
    total = F.q + 1
    for x in F.elements():
        rhs = F.add(F.mul(F.add(F.mul(F.add(x, A2), x), A4), x), A6)
        total += F.chi(rhs)
    return total


def _fibration_good_scalar(field, a2, a4, a6):
    F = field
    good = 0
    bad_ts = []

    def evalp(coeffs, x):
        acc = F.zero
        for c in reversed(coeffs):
            acc = F.add(F.mul(acc, x), F.from_int(c))
        return acc

    for t0 in F.elements():
        A2, A4, A6 = evalp(a2, t0), evalp(a4, t0), evalp(a6, t0)
        if _delta0(F, FqPoly(F, [A2]), FqPoly(F, [A4]), FqPoly(F, [A6])) == F.zero:
            bad_ts.append(t0)
        else:
            good += _good_fiber_count_scalar(F, A2, A4, A6)
    return good, bad_ts


def _fibration_good_np(field, a2, a4, a6):
    p = field.p
    chi_p = chi_table(p)
    if field.n == 1:
        ts = np.arange(p, dtype=np.int64)
        A2 = _horner_np(a2, ts, p)
        A4 = _horner_np(a4, ts, p)
        A6 = _horner_np(a6, ts, p)
        # Delta vector
        D = _delta_np(A2, A4, A6, p)
        bad_mask = D == 0
        xs = np.arange(p, dtype=np.int64)
        good = 0
        for i in range(p):
            if bad_mask[i]:
                continue
            rhs = (((xs + A2[i]) * xs + A4[i]) * xs + A6[i]) % p
            good += p + 1 + int(chi_p[rhs].sum())
        bad_ts = [field.from_int(int(t)) for t in ts[bad_mask]]
        return good, bad_ts
    # F_{p^2}
    r = _nonresidue(p)
    q = p * p
    t0v = np.tile(np.arange(p, dtype=np.int64), p)
    t1v = np.repeat(np.arange(p, dtype=np.int64), p)
    A2 = _horner_np_pair(a2, t0v, t1v, r, p)
    A4 = _horner_np_pair(a4, t0v, t1v, r, p)
    A6 = _horner_np_pair(a6, t0v, t1v, r, p)
    D0, D1 = _delta_np_pair(A2, A4, A6, r, p)
    bad_mask = (D0 == 0) & (D1 == 0)
    x0 = np.tile(np.arange(p, dtype=np.int64), p)
    x1 = np.repeat(np.arange(p, dtype=np.int64), p)
    good = 0
    for i in range(q):
        if bad_mask[i]:
            continue
        a20, a21 = int(A2[0][i]), int(A2[1][i])
        a40, a41 = int(A4[0][i]), int(A4[1][i])
        a60, a61 = int(A6[0][i]), int(A6[1][i])
        acc0 = (x0 + a20) % p
        acc1 = (x1 + a21) % p
        acc0, acc1 = _pair_mul(acc0, acc1, x0, x1, r, p)
        acc0 = (acc0 + a40) % p
        acc1 = (acc1 + a41) % p
        acc0, acc1 = _pair_mul(acc0, acc1, x0, x1, r, p)
        acc0 = (acc0 + a60) % p
        acc1 = (acc1 + a61) % p
        norm = (acc0 * acc0 - r * (acc1 * acc1)) % p
        good += q + 1 + int(chi_p[norm].sum())
    bad_ts = [(int(t0v[i]), int(t1v[i])) for i in range(q) if bad_mask[i]]
    # translate encodings into ExtField tuples: theta^2 = r must match the
    # lexicographic field modulus, so rebuild elements through the field
    bad_elems = []
    for (u0, u1) in bad_ts:
        bad_elems.append(_pair_to_field_elem(field, u0, u1, r))
    return good, bad_elems


def _pair_to_field_elem(field: ExtField, u0: int, u1: int, r: int):
    """(u0 + u1*sqrt(r)) as an element of the canonical F_{p^2}."""
    if u1 == 0:
        return field.from_int(u0)
    s = field.sqrt(field.from_int(r))
    if s is None:
        raise AssertionError("nonresidue has no root in F_{p^2}?")
    return field.add(field.from_int(u0), field.smul(u1, s))


def _horner_np(coeffs, xs, p):
    acc = np.zeros_like(xs)
    for c in reversed(coeffs):
        acc = (acc * xs + c) % p
    return acc


def _delta_np(A2, A4, A6, p):
    b2 = 4 * A2 % p
    b4 = 2 * A4 % p
    b6 = 4 * A6 % p
    b8 = (4 * A2 * A6 - A4 * A4) % p
    return (9 * b2 * b4 % p * b6 - b2 * b2 % p * b8 - 8 * b4 * b4 % p * b4
            - 27 * b6 * b6) % p


def _horner_np_pair(coeffs, x0, x1, r, p):
    a0 = np.zeros_like(x0)
    a1 = np.zeros_like(x1)
    for c in reversed(coeffs):
        a0, a1 = _pair_mul(a0, a1, x0, x1, r, p)
        a0 = (a0 + c) % p
    return a0, a1


def _delta_np_pair(A2, A4, A6, r, p):
    a20, a21 = A2
    a40, a41 = A4
    a60, a61 = A6
    b20, b21 = 4 * a20 % p, 4 * a21 % p
    b40, b41 = 2 * a40 % p, 2 * a41 % p
    b60, b61 = 4 * a60 % p, 4 * a61 % p
    t0, t1 = _pair_mul(a20, a21, a60, a61, r, p)
    u0, u1 = _pair_mul(a40, a41, a40, a41, r, p)
    b80, b81 = (4 * t0 - u0) % p, (4 * t1 - u1) % p
    x0, x1 = _pair_mul(b20, b21, b40, b41, r, p)
    x0, x1 = _pair_mul(x0, x1, b60, b61, r, p)
    term1 = (9 * x0 % p, 9 * x1 % p)
    y0, y1 = _pair_mul(b20, b21, b20, b21, r, p)
    y0, y1 = _pair_mul(y0, y1, b80, b81, r, p)
    z0, z1 = _pair_mul(b40, b41, b40, b41, r, p)
    z0, z1 = _pair_mul(z0, z1, b40, b41, r, p)
    w0, w1 = _pair_mul(b60, b61, b60, b61, r, p)
    d0 = (term1[0] - y0 - 8 * z0 - 27 * w0) % p
    d1 = (term1[1] - y1 - 8 * z1 - 27 * w1) % p
    return d0, d1


def _shifted_fqpoly(field: ExtField, int_coeffs, t0) -> FqPoly:
    """Coefficient list mod p recentred at t0 (t0 None = already local)."""
    F = field
    poly = FqPoly(F, [F.from_int(c) for c in int_coeffs])
    if t0 is None or t0 == F.zero:
        return poly
    return poly.shift(t0)


# three-way driver -----------------------------------------------------------


def three_way_counts(p: int, n: int, fix: SurfaceFixture | None = None,
                     fibration: EllipticSurface | None = None) -> dict:
    """count_smooth and count_via_fibration at q = p^n, exact integers."""
    from .models import e2_surface
    fix = fix or load_surface()
    fibration = fibration or e2_surface()
    field = build_extension(p, n)
    smooth = count_smooth(fix, field)
    fib = count_via_fibration(fibration, field)
    return {"p": p, "n": n, "q": field.q, "count_smooth": smooth.smooth,
            "count_raw": smooth.raw, "count_fibration": fib,
            "agree": smooth.smooth == fib}
