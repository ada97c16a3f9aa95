"""Torsion subgroups: Lutz-Nagell over Q, division polynomials over K."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import mpmath
import sympy

from ..qfield import QElem, QuadField, kronecker, omega_root_mod
from .model import CurveModel, count_points_mod

MAZUR_MAX = 16


@dataclass(frozen=True)
class TorsionInfo:
    order: int
    structure: tuple[int, int]
    points: tuple  # affine points; the identity is implicit

    def to_json(self) -> dict:
        def fmt(c):
            if isinstance(c, QElem):
                return [str(c.a), str(c.b)]
            return str(c)

        return {
            "order": self.order,
            "structure": list(self.structure),
            "points": [[fmt(x), fmt(y)] for x, y in self.points],
        }


def _structure(E: CurveModel, pts) -> tuple[int, int]:
    n = len(pts) + 1
    two_torsion = sum(1 for P in pts if E.add(P, P) is None)
    n1 = 2 if two_torsion == 3 else 1
    # over K the full 2-torsion may be joined by larger non-cyclic parts
    if E.base is not None:
        for m in range(n, 1, -1):
            if n % (m * m) == 0 and _m_torsion_count(E, pts, m) == m * m:
                n1 = m
                break
    return n1, n // n1


def _m_torsion_count(E, pts, m):
    return 1 + sum(1 for P in pts if E.mul(m, P) is None)


def _reduction_bound(E: CurveModel, nprimes: int = 2) -> int:
    """gcd of #E(F_p) over good primes p >= 3."""
    disc = E.discriminant
    ainvs = E.ainvs
    g = 0
    used = 0
    p = 2
    while used < nprimes:
        p = sympy.nextprime(p)
        if any(a.denominator % p == 0 for a in ainvs) or disc.numerator % p == 0:
            continue
        red = [a.numerator * pow(a.denominator, -1, p) % p for a in ainvs]
        g = math.gcd(g, count_points_mod(red, p))
        used += 1
    return g


def _integer_roots(coeffs: list[int]) -> list[int]:
    """Integer roots of a monic cubic with integer coefficients."""
    digits = max(len(str(abs(c))) for c in coeffs) + 20
    with mpmath.workdps(digits):
        roots = mpmath.polyroots(coeffs, maxsteps=200, extraprec=4 * digits)
    out = set()
    for r in roots:
        if abs(mpmath.im(r)) > 1e-6 * (1 + abs(r)):
            continue
        c = int(mpmath.nint(mpmath.re(r)))
        for x in (c - 1, c, c + 1):
            if sum(a * x ** (len(coeffs) - 1 - i) for i, a in enumerate(coeffs)) == 0:
                out.add(x)
    return sorted(out)


def torsion(E: CurveModel) -> TorsionInfo:
    """E(Q)_tors by Lutz-Nagell on an integral short model.

    Candidate orders are restricted to divisors of the gcd of #E(F_p) at the
    first two good primes p >= 3.
    """
    if E.base is not None:
        return torsion_K(E)
    b2, b4, b6, _ = E.b_invariants
    c4, c6 = E.c_invariants
    # Y^2 = X^3 - 27 c4 X - 54 c6 with X = 36x + 3b2, Y = 108(2y + a1 x + a3)
    A, B = -27 * c4, -54 * c6
    den = math.lcm(A.denominator, B.denominator)
    # clear denominators: X -> X/u^2, Y -> Y/u^3 with u = den
    u = den
    A, B = int(A * u**4), int(B * u**6)
    bound = _reduction_bound(E)
    disc = 4 * A**3 + 27 * B**2
    fac = sympy.factorint(abs(disc))
    ys = [0]
    for exps in product(*[range(e // 2 + 1) for e in fac.values()]):
        d = math.prod(p**k for p, k in zip(fac, exps))
        ys += [d, -d]
    pts = set()
    for Y in ys:
        for X in _integer_roots([1, 0, A, B - Y * Y]):
            x = (Fraction(X, u * u) - 3 * b2) / 36
            y = (Fraction(Y, u**3) / 108 - E.a1 * x - E.a3) / 2
            P = (x, y)
            n = E.point_order(P, bound=min(bound, MAZUR_MAX))
            if n is not None and bound % n == 0:
                pts.add(P)
    pts = tuple(sorted(pts))
    return TorsionInfo(len(pts) + 1, _structure(E, pts), pts)


# -------------------------------------------------------------------------
# over K


def division_polys(E: CurveModel, n: int):
    """f_1..f_n as sympy polynomials in x with f_2 = 1 (psi_2 removed).

    Nonzero points P with 2P != 0 satisfy n P = 0 iff f_n(x(P)) = 0.
    """
    x = sympy.Symbol("x")
    b2, b4, b6, b8 = (_sym(c) for c in E.b_invariants)
    F = 4 * x**3 + b2 * x**2 + 2 * b4 * x + b6
    f = {0: sympy.Integer(0), 1: sympy.Integer(1), 2: sympy.Integer(1)}
    f[3] = 3 * x**4 + b2 * x**3 + 3 * b4 * x**2 + 3 * b6 * x + b8
    f[4] = (
        2 * x**6 + b2 * x**5 + 5 * b4 * x**4 + 10 * b6 * x**3 + 10 * b8 * x**2
        + (b2 * b8 - b4 * b6) * x + (b4 * b8 - b6**2)
    )
    for m in range(5, n + 1):
        k = m // 2
        if m % 2:
            if k % 2:
                t = f[k + 2] * f[k] ** 3 - F**2 * f[k - 1] * f[k + 1] ** 3
            else:
                t = F**2 * f[k + 2] * f[k] ** 3 - f[k - 1] * f[k + 1] ** 3
        else:
            t = f[k] * (f[k + 2] * f[k - 1] ** 2 - f[k - 2] * f[k + 1] ** 2)
        f[m] = sympy.expand(t)
    return x, F, f


def _sym(c):
    if isinstance(c, QElem):
        D = c.K.disc
        return sympy.Rational(c.a) + sympy.Rational(c.b) * (D + sympy.sqrt(D)) / 2
    return sympy.Rational(c)


def _from_sym(expr, K: QuadField) -> QElem | None:
    expr = sympy.expand(expr)
    re_part = sympy.nsimplify(sympy.re(expr))
    b = sympy.nsimplify(sympy.im(expr) / sympy.sqrt(-K.disc))
    if not (re_part.is_rational and b.is_rational):
        return None
    return K.from_sqrt(Fraction(str(re_part)), Fraction(str(b)))


def _roots_in_K(poly, x, K: QuadField) -> list[QElem]:
    if poly == 0:
        return []
    P = sympy.Poly(poly, x, extension=sympy.sqrt(K.disc))
    out = []
    for fac, _ in P.factor_list()[1]:
        if fac.degree() == 1:
            c1, c0 = fac.all_coeffs()
            r = _from_sym(-c0 / c1, K)
            if r is not None:
                out.append(r)
    return out


def _sqrt_in_K(z: QElem) -> QElem | None:
    if not z:
        return z
    t = sympy.Symbol("t")
    roots = _roots_in_K(t**2 - _sym(z), t, z.K)
    return roots[0] if roots else None


def _points_with_x(E: CurveModel, X: QElem):
    a1, a2, a3, a4, a6 = E.ainvs
    # y^2 + (a1 x + a3) y - rhs = 0
    b = a1 * X + a3
    c = -(X**3 + a2 * X * X + a4 * X + a6)
    r = _sqrt_in_K(b * b - 4 * c)
    if r is None:
        return []
    return list({((X), (-b + r) / 2), (X, (-b - r) / 2)})


def _reduction_bound_K(E: CurveModel, nprimes: int = 3) -> int:
    """gcd of #E(k_P) over split primes P of good reduction, p >= 5."""
    K = E.base
    disc = E.discriminant
    g = 0
    used = 0
    p = 3
    while used < nprimes:
        p = sympy.nextprime(p)
        if kronecker(K.disc, p) != 1:
            continue
        rho = omega_root_mod(p, K)

        def red(c):
            a = c.a.numerator * pow(c.a.denominator, -1, p) if c.a.denominator % p else None
            b = c.b.numerator * pow(c.b.denominator, -1, p) if c.b.denominator % p else None
            if a is None or b is None:
                return None
            return (a + b * rho) % p

        red_a = [red(c) for c in E.ainvs]
        if None in red_a or red(disc) in (None, 0):
            continue
        g = math.gcd(g, count_points_mod(red_a, p))
        used += 1
    return g


def torsion_K(E: CurveModel) -> TorsionInfo:
    """E(K)_tors for a curve over an imaginary quadratic field."""
    K = E.base
    bound = _reduction_bound_K(E)
    fac = sympy.factorint(bound)
    x, F, f = division_polys(E, max([4] + [ell**k for ell, k in fac.items()]))
    subgroups = []
    for ell, k in fac.items():
        n = ell**k
        xs = set(_roots_in_K(F, x, K)) if ell == 2 else set()
        if n >= 3:
            xs |= set(_roots_in_K(f[n], x, K))
        pts = set()
        for X in xs:
            for P in _points_with_x(E, X):
                o = E.point_order(P, bound=n)
                if o is not None and n % o == 0:
                    pts.add(P)
        subgroups.append([None, *pts])
    group = [None]
    for sub in subgroups:
        group = list({E.add(P, Q) for P in group for Q in sub})
    pts = tuple(sorted((P for P in group if P is not None), key=_point_key))
    return TorsionInfo(len(pts) + 1, _structure(E, pts), pts)


def _point_key(P):
    x, y = P
    return (x.a, x.b, y.a, y.b) if isinstance(x, QElem) else (x, y)
