"""Supersingular-reduction sieve for the quartic j-invariant field.

For each prime p, the reductions of the j-invariant live among the roots of
the integer quartic P(T) mod p inside F_{p^2}; p is a supersingular prime
exactly when one of those roots is a supersingular j-invariant, decided by
the Hasse-invariant coefficient of a curve with that j.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .elliptic import CurveOverFq, curve_with_j, is_supersingular
from .ffield import ExtField, FqPoly, build_extension, find_roots, is_prime
from .fixtures import load_tower_constants


def default_quartic():
    return load_tower_constants().j_min_poly


def poly_discriminant_exact(coeffs) -> int:
    """Discriminant of an integer polynomial via sympy (exact)."""
    import sympy
    t = sympy.Symbol("T")
    expr = sum(sympy.Integer(c) * t ** i for i, c in enumerate(coeffs))
    return int(sympy.discriminant(expr, t))


@dataclass
class ScanConfig:
    quartic: list
    lo: int
    hi: int
    excluded: set = field(default_factory=lambda: {2, 3, 5})
    exclude_ramified: bool = False

    def __post_init__(self):
        if self.exclude_ramified:
            # ramified primes (dividing disc P) get a distinct marker but are
            # still decided by the same root test
            self._disc = poly_discriminant_exact(self.quartic)
        else:
            self._disc = None

    def is_ramified(self, p: int) -> bool:
        if self._disc is None:
            return False
        return self._disc % p == 0


@dataclass
class Witness:
    p: int
    root: tuple          # coordinates of j0 in the canonical F_{p^2} basis
    root_in_fp: bool
    hasse_zero: bool
    special: str | None  # "j=0" or "j=1728" congruence shortcut, if used


def roots_in_fp2(quartic, p: int):
    """Roots of the quartic mod p inside F_{p^2}, via the degree-2 field."""
    F2 = build_extension(p, 2)
    f = FqPoly.from_ints(F2, [c % p for c in quartic])
    if f.is_zero():
        return F2, set()
    return F2, find_roots(f, F2, exhaustive=False)


def is_supersingular_prime(p: int, quartic=None, config: ScanConfig | None = None):
    """(verdict, witnesses) for a single prime.

    Primes where the quartic has no root in F_{p^2} (irreducible of degree 4
    mod p) are reported non-supersingular with an empty witness list and a
    marker in the report.
    """
    quartic = quartic if quartic is not None else default_quartic()
    if p < 7 or not is_prime(p):
        raise ValueError(f"p = {p} must be a prime >= 7")
    if config and p in config.excluded:
        raise ValueError(f"p = {p} is excluded")
    F2, roots = roots_in_fp2(quartic, p)
    witnesses = []
    verdict = False
    for j0 in sorted(roots):
        special = None
        if j0 == F2.zero:
            ss = p % 3 == 2
            special = "j=0"
        elif j0 == F2.from_int(1728):
            ss = p % 4 == 3
            special = "j=1728"
        else:
            E = curve_with_j(F2, j0)
            ss = is_supersingular(E)
        if ss:
            verdict = True
            witnesses.append(Witness(p, j0, all(c == 0 for c in j0[1:]),
                                     True, special))
    return verdict, witnesses, len(roots)


@dataclass
class ScanReport:
    config: ScanConfig
    primes: list
    witnesses: dict
    no_root_primes: list
    ramified_seen: list

    def verify_witnesses(self) -> bool:
        """Re-run the single-prime test for every reported prime."""
        for p in self.primes:
            verdict, wit, _ = is_supersingular_prime(p, self.config.quartic)
            if not verdict:
                return False
        return True


def scan(config: ScanConfig, threads: int = 1) -> ScanReport:
    """All supersingular primes in [lo, hi], sorted, with witnesses."""
    ps = [p for p in range(max(config.lo, 7), config.hi + 1)
          if is_prime(p) and p not in config.excluded]
    found = []
    witnesses = {}
    no_root = []
    ramified = []
    if threads > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(_scan_one, [(p, config.quartic) for p in ps],
                                  chunksize=16))
    else:
        results = [_scan_one((p, config.quartic)) for p in ps]
    for p, (verdict, wit, nroots) in zip(ps, results):
        if config.is_ramified(p):
            ramified.append(p)
        if nroots == 0:
            no_root.append(p)
        if verdict:
            found.append(p)
            witnesses[p] = wit
    report = ScanReport(config, sorted(found), witnesses, no_root, ramified)
    if not report.verify_witnesses():
        raise AssertionError("witness re-verification failed")
    return report


def _scan_one(args):
    p, quartic = args
    return is_supersingular_prime(p, quartic)


def density_guard(report: ScanReport, window: int = 10 ** 4) -> bool:
    """Loose sanity flag: supersingular fraction below 10% of scanned primes."""
    total = sum(1 for p in range(max(report.config.lo, 7), report.config.hi + 1)
                if is_prime(p))
    if total == 0:
        return True
    return len(report.primes) / total < 0.10
