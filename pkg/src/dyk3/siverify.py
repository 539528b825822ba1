"""Cross-checks of the product-abelian-surface structure: the five-equation
coefficient system, quadratic-twist trace relations, Galois independence of
traces at split primes, and the closed point-count formulas."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .elliptic import WeierstrassModel
from .ffield import kronecker
from .fixtures import load_tower_constants
from .models import kummer_surface
from .numfield import (SplitEmbedding, TowerElement, sqrt_in_quadratic,
                       verify_si_system)


def _inose_normalized_coeffs():
    """Laurent data of the pulled-back fibration after x -> t^2 X, y -> t^3 Y:
    Y^2 = X^3 + p X + (q2 t^2 + q0 + qm2 / t^2)."""
    p = TowerElement.k4(Fraction(-71, 6), 0, Fraction(-45, 6), 0)
    q2 = TowerElement.k4(Fraction(3, 2), 0, Fraction(-1, 2), 0)
    q0 = TowerElement.k4(Fraction(-551, 27), 0, Fraction(-189, 27), 0)
    qm2 = q2
    return p, q2, q0, qm2


def sqrt_in_k4(x: TowerElement):
    """A square root of x inside Q(sqrt2, sqrt5), or None.

    Writes y = u + v*sqrt5 with u, v in Q(sqrt2) and solves the nested
    quadratic system exactly.
    """
    if not x.in_k4():
        raise ValueError("element not in K4")
    co = x.co
    s = (Fraction(co[0]), Fraction(co[1]))   # rational + sqrt2 part
    t = (Fraction(co[2]), Fraction(co[3]))   # sqrt5 + sqrt10 part
    if t == (0, 0):
        r = sqrt_in_quadratic(s[0], s[1], 2)
        if r is not None:
            return TowerElement.k4(r[0], r[1], 0, 0)
        # maybe a sqrt5 multiple: x = 5 w^2 with w in Q(sqrt2)
        r = sqrt_in_quadratic(s[0] / 5, s[1] / 5, 2)
        if r is not None:
            return TowerElement.k4(0, 0, r[0], r[1])
        return None
    # s^2 - 5 t^2 in Q(sqrt2)
    s2 = _q2_mul(s, s)
    t2 = _q2_mul(t, t)
    disc = (s2[0] - 5 * t2[0], s2[1] - 5 * t2[1])
    root = sqrt_in_quadratic(disc[0], disc[1], 2)
    if root is None:
        return None
    for sign in (1, -1):
        u2 = ((s[0] + sign * root[0]) / 2, (s[1] + sign * root[1]) / 2)
        u = sqrt_in_quadratic(u2[0], u2[1], 2)
        if u is not None and u != (0, 0):
            vden = _q2_mul((2 * u[0], 2 * u[1]), (1, 0))
            v = _q2_div(t, (2 * u[0], 2 * u[1]))
            return TowerElement.k4(u[0], u[1], v[0], v[1])
    return None


def _q2_mul(a, b):
    return (a[0] * b[0] + 2 * a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _q2_div(a, b):
    n = b[0] * b[0] - 2 * b[1] * b[1]
    conj = (b[0] / n, -b[1] / n)
    return _q2_mul(a, conj)


def verify_kummer_match(constants=None) -> dict:
    """The five stated equations, re-derived as coefficient matching.

    Solves the Weierstrass scaling lambda and base rescaling nu from three
    of the four coefficient-match conditions and verifies the fourth plus
    the consistency (lambda^6)^2 = (lambda^4)^3; also reports whether
    lambda^2 is eta^2 times a K4 square (the quadratic-twist statement).
    """
    cst = constants or load_tower_constants()
    system = verify_si_system(cst.A, cst.a, cst.b, cst.c, cst.d)
    _, laurent = kummer_surface(cst.a, cst.b, cst.c, cst.d)
    pI, q2I, q0I, qm2I = _inose_normalized_coeffs()
    lam4 = laurent["x_coeff"] / pI
    lam6 = laurent["const"] / q0I
    cube_square_ok = (lam6 * lam6) == (lam4 ** 3)
    nu2 = lam6 * q2I / laurent["u2"]
    fourth_ok = laurent["um2"] / nu2 == lam6 * qm2I
    lam2 = lam6 / lam4
    lam = sqrt_in_k4(lam2)
    return {
        "system": system,
        "system_zero": all(e["zero"] for e in system),
        "lambda4": lam4,
        "lambda6": lam6,
        "nu2": nu2,
        "match_consistency": cube_square_ok,
        "fourth_equation": fourth_ok,
        "base_rescale_trivial": nu2 == TowerElement.rational(1),
        "scaling_in_k4": lam is not None,
        "ok": all(e["zero"] for e in system) and cube_square_ok and fourth_ok,
    }


def _j_as_even_function(surf):
    """j of a fibration whose coefficients depend only on t^2, returned as
    (numerator, denominator) polynomials in v = t^2."""
    from .poly import RationalFunc, Poly, TOWER
    c4, _, d = surf.c4_c6_delta()
    j = RationalFunc(c4) ** 3 / RationalFunc(d)
    for p in (j.num, j.den):
        if any(not TOWER.is_zero(c) for i, c in enumerate(p.coeffs) if i % 2):
            raise ValueError("j has odd-degree terms")
    from .poly import Poly as _P
    return (_P(TOWER, j.num.coeffs[0::2]), _P(TOWER, j.den.coeffs[0::2]))


def verify_inose_compatibility(constants=None) -> dict:
    """j-level check that Kum(E1 x E2) and the pulled-back fibration are
    isomorphic after the base identification u = t/eta.

    Solves the square s of the base-change factor from leading coefficients,
    verifies j_K(s t^2) = j_I(t^2) exactly, and checks s * eta^2 (or
    s / eta^2) is a perfect square in K4 -- so the two fibrations become
    isomorphic over the quadratic extension K4(eta).
    """
    from .models import inose_surface, kummer_surface
    from .poly import Poly, TOWER
    cst = constants or load_tower_constants()
    E1 = _curve(cst, "E1")
    E2 = _curve(cst, "E2")
    A1, B1 = E1.short_form()
    A2, B2 = E2.short_form()
    K, _ = kummer_surface(A1, B1, A2, B2)
    I = inose_surface()
    NK, DK = _j_as_even_function(K)
    NI, DI = _j_as_even_function(I)
    if NK.degree() != 2 or NI.degree() != 2:
        raise AssertionError("unexpected j numerator shape")
    cK = NK.coeffs[2]
    ratio = (cK * DI.lead()) / (NI.lead() * DK.lead())   # = s^(deg DK - 2)
    if DK.degree() - 2 != 2:
        raise AssertionError("unexpected j denominator degree")
    s = sqrt_in_k4(ratio)
    if s is None:
        return {"ok": False, "reason": "base factor square not in K4"}
    ok = False
    for cand in (s, -1 * s):
        DKs = Poly(TOWER, [c * (cand ** i) for i, c in enumerate(DK.coeffs)])
        lhs = Poly(TOWER, [TOWER.zero, TOWER.zero, cK * cand * cand]) * DI
        if (lhs - NI * DKs).is_zero():
            s = cand
            ok = True
            break
    eta2 = cst.eta_squared
    eta_link = (sqrt_in_k4(s * eta2) is not None
                or sqrt_in_k4(s / eta2) is not None)
    return {"ok": ok, "base_factor_square": s, "eta_linked": eta_link}


def _curve(cst, name) -> WeierstrassModel:
    cur = cst.curves[name]
    return WeierstrassModel.with_a2(cur["a2"], cur["a4"], cur["a6"])


def trace_at_split_prime(model: WeierstrassModel, p: int) -> dict:
    """Frobenius trace of the reduction at all four K4 embeddings."""
    traces = []
    for emb in SplitEmbedding.enumerate_k4(p):
        E = model.reduce(emb)
        traces.append(E.count_points().a)
    return {"p": p, "traces": traces, "common": traces[0],
            "galois_independent": len(set(traces)) == 1}


def verify_twist_relation(p: int, constants=None) -> dict:
    """a(E1) = chi_p(kappa) * a(E256) at every embedding."""
    cst = constants or load_tower_constants()
    E1 = _curve(cst, "E1")
    E256 = _curve(cst, "E256_i2")
    rows = []
    ok = True
    for emb in SplitEmbedding.enumerate_k4(p):
        kap = None
        from .numfield import reduce_mod_p
        kap = reduce_mod_p(cst.kappa, emb)
        if kap == 0:
            raise ValueError("twist element reduces to zero")
        chi = kronecker(kap, p)
        a1 = E1.reduce(emb).count_points().a
        a256 = E256.reduce(emb).count_points().a
        rows.append({"r2": emb.r2, "r5": emb.r5, "chi_kappa": chi,
                     "a_E1": a1, "a_E256": a256})
        ok = ok and (a1 == chi * a256)
    return {"p": p, "ok": ok, "rows": rows}


@dataclass
class CountPrediction:
    p: int
    a_p: int
    mu: int
    count1: int
    t_p: int
    count2: int

    def __post_init__(self):
        p = self.p
        if self.mu != self.a_p ** 2 - kronecker(10, p) * p:
            raise ValueError("mu inconsistent with a_p")
        if self.t_p != self.a_p ** 2 - 2 * p:
            raise ValueError("t(p) inconsistent with a_p")


def predict_counts(p: int, constants=None) -> CountPrediction:
    """|S(F_p)| and |S(F_{p^2})| from the reduction trace of the first curve.

    Requires p >= 7 split in Q(sqrt2, sqrt5) with good reduction; the trace
    is obtained by counting the reduced curve, never from eigenvalue tables.
    """
    if p < 7:
        raise ValueError("p must be at least 7")
    if not SplitEmbedding.splits_k4(p):
        raise ValueError(f"p = {p} is not split in Q(sqrt2, sqrt5)")
    cst = constants or load_tower_constants()
    # the conductor-norm-256 curve is the Galois-independent one (base-change
    # newform); the first curve is its kappa-twist, so its traces agree only
    # up to sign -- harmless, since only a^2 enters the formulas
    E256 = _curve(cst, "E256_i2")
    tr = trace_at_split_prime(E256, p)
    if not tr["galois_independent"]:
        raise AssertionError("embedding traces of the base-change curve disagree")
    E1 = _curve(cst, "E1")
    tr1 = trace_at_split_prime(E1, p)
    if {t * t for t in tr1["traces"]} != {tr["common"] ** 2}:
        raise AssertionError("twist trace squares disagree")
    a = tr["common"]
    kron5 = kronecker(5, p)
    mu = a * a - kronecker(10, p) * p
    count1 = 1 + 17 * p + (1 + kron5) * p + mu + p * p
    t_p = a * a - 2 * p
    count2 = 1 + 18 * p ** 2 + t_p ** 2 + p ** 4
    return CountPrediction(p, a, mu, count1, t_p, count2)


def predicted_count(p: int, n: int, constants=None) -> int:
    pred = predict_counts(p, constants)
    if n == 1:
        return pred.count1
    if n == 2:
        return pred.count2
    raise ValueError("prediction implemented for n = 1, 2")


def simultaneous_twist_check(p: int, constants=None) -> dict:
    """Predictions from (E1, E2) and from their kappa-twists coincide.

    mu(p) uses a^2, and a twist only flips the sign of a, so equality is
    checked on the squares of the traces of both curves in the pair.
    """
    cst = constants or load_tower_constants()
    E1 = _curve(cst, "E1")
    E2 = _curve(cst, "E2")
    E1t = E1.quadratic_twist(cst.kappa)
    E2t = E2.quadratic_twist(cst.kappa)
    rows = []
    ok = True
    for emb in SplitEmbedding.enumerate_k4(p):
        a1 = E1.reduce(emb).count_points().a
        a2 = E2.reduce(emb).count_points().a
        b1 = E1t.reduce(emb).count_points().a
        b2 = E2t.reduce(emb).count_points().a
        rows.append((a1, a2, b1, b2))
        ok = ok and a1 * a1 == b1 * b1 and a2 * a2 == b2 * b2
    return {"p": p, "ok": ok, "rows": rows}
