"""Period lattices, the real Neron period, and the equivariant period over K.

Periods are those of the Neron differential dx/(2y + a1 x + a3).  With
Y = 2y + a1 x + a3 the curve reads Y^2 = 4x^3 + b2 x^2 + 2 b4 x + b6, and the
lattice L of periods satisfies g2(L) = c4/12, g3(L) = c6/216.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .curve import CurveModel, is_minimal
from .qfield import FracIdeal, QElem, QuadField


class NonMinimalModelError(ValueError):
    pass


class UnsupportedPeriodError(ValueError):
    pass


def agm(a, b, tol=None):
    """Complex AGM with the right choice of square root at every step."""
    a, b = mpmath.mpmathify(a), mpmath.mpmathify(b)
    if tol is None:
        tol = mpmath.ldexp(1, -mpmath.mp.prec + 4)
    for _ in range(10 * mpmath.mp.prec):
        if abs(a - b) <= tol * abs(a):
            return a
        a1 = (a + b) / 2
        b1 = mpmath.sqrt(a * b)
        if abs(a1 - b1) > abs(a1 + b1):
            b1 = -b1
        a, b = a1, b1
    raise ArithmeticError("AGM did not converge")


@dataclass(frozen=True)
class PeriodLattice:
    w1: object
    w2: object
    real_locus_components: int | None  # None for a non-real embedding
    residual: object  # Eisenstein reconstruction error

    @property
    def tau(self):
        return self.w2 / self.w1

    @property
    def covolume(self):
        return abs(mpmath.im(mpmath.conj(self.w1) * self.w2))


def _embed(c, conj: bool):
    if isinstance(c, QElem):
        z = c.to_mpc()
        return mpmath.conj(z) if conj else z
    return mpmath.mpf(c.numerator) / c.denominator


def _g2g3(E: CurveModel, conj: bool = False):
    c4, c6 = E.c_invariants
    return _embed(c4, conj) / 12, _embed(c6, conj) / 216


def eisenstein_g2g3(w1, w2):
    """(g2, g3) of the lattice Z w1 + Z w2 from q-expansions of E4, E6."""
    w1, w2 = _reduce_basis(w1, w2)
    tau = w2 / w1
    q = mpmath.exp(2j * mpmath.pi * tau)
    e4 = mpmath.mpf(1)
    e6 = mpmath.mpf(1)
    qn = mpmath.mpf(1)
    eps = mpmath.ldexp(1, -mpmath.mp.prec - 8)
    n = 0
    while True:
        n += 1
        qn *= q
        s3 = sum(d**3 for d in range(1, n + 1) if n % d == 0)
        s5 = sum(d**5 for d in range(1, n + 1) if n % d == 0)
        t4, t6 = 240 * s3 * qn, 504 * s5 * qn
        e4 += t4
        e6 -= t6
        if abs(t6) < eps and n > 2:
            break
    pi = mpmath.pi
    g2 = 4 * pi**4 / 3 * e4 / w1**4
    g3 = 8 * pi**6 / 27 * e6 / w1**6
    return g2, g3


def _reduce_basis(w1, w2):
    """Lagrange-Gauss reduction with Im(w2/w1) > 0."""
    if mpmath.im(w2 / w1) < 0:
        w2 = -w2
    for _ in range(1000):
        if abs(w2) < abs(w1):
            w1, w2 = -w2, w1
        m = mpmath.nint(mpmath.re(w2 / w1))
        if m == 0:
            break
        w2 = w2 - m * w1
    if abs(w2) < abs(w1):
        w1, w2 = -w2, w1
    return w1, w2


def _candidates(roots):
    pi = mpmath.pi
    out = []
    for e1, e2, e3 in itertools.permutations(roots):
        a = mpmath.sqrt(e1 - e3)
        b = mpmath.sqrt(e1 - e2)
        c = mpmath.sqrt(e2 - e3)
        if b != 0:
            out.append(pi / agm(a, b))
        if c != 0:
            out.append(1j * pi / agm(a, c))
    return out


def period_lattice(E: CurveModel, conj_embedding: bool = False) -> PeriodLattice:
    """AGM period lattice of the Neron differential under a complex embedding.

    Over K the embedding sends w = (D + sqrt D)/2 to the root with positive
    imaginary part (or its conjugate with ``conj_embedding``).
    """
    b2, b4, b6, _ = (_embed(b, conj_embedding) for b in E.b_invariants)
    roots = mpmath.polyroots([4, b2, 2 * b4, b6], maxsteps=200, extraprec=2 * mpmath.mp.prec)
    g2, g3 = _g2g3(E, conj_embedding)
    scale = max(abs(g2), abs(g3), 1)
    tol = mpmath.ldexp(1, -mpmath.mp.prec + 24)
    cands = _candidates(roots)
    best = None
    for v1, v2 in itertools.combinations(cands, 2):
        if abs(mpmath.im(v2 / v1)) < mpmath.mpf(10) ** -8:
            continue
        w1, w2 = _reduce_basis(v1, v2)
        G2, G3 = eisenstein_g2g3(w1, w2)
        res = (abs(G2 - g2) + abs(G3 - g3)) / scale
        if best is None or res < best[0]:
            best = (res, w1, w2)
        if res < tol:
            break
    res, w1, w2 = best
    if res > mpmath.ldexp(1, -mpmath.mp.prec // 2):
        raise ArithmeticError(f"period lattice reconstruction failed (residual {res})")
    comps = None
    if E.base is None:
        comps = 2 if E.discriminant > 0 else 1
        w1, w2 = _real_basis(w1, w2)
    return PeriodLattice(w1, w2, comps, res)


def _real_basis(w1, w2):
    """Basis (w1, w2) with w1 the least positive real period."""
    best = None
    for m in range(-3, 4):
        for n in range(-3, 4):
            if m == 0 and n == 0:
                continue
            z = m * w1 + n * w2
            if abs(mpmath.im(z)) < abs(z) * mpmath.ldexp(1, -mpmath.mp.prec // 2) and mpmath.re(z) > 0:
                if best is None or mpmath.re(z) < mpmath.re(best[0]):
                    best = (z, m, n)
    if best is None:
        raise ArithmeticError("no real period found")
    z, m, n = best
    # complete (m, n) to a unimodular matrix
    g, x, y = _xgcd(m, n)
    other = -y * w1 + x * w2
    r = mpmath.re(z)
    if mpmath.im(other / r) < 0:
        other = -other
    return r, other


def _xgcd(a, b):
    if b == 0:
        return (abs(a), 1 if a >= 0 else -1, 0)
    g, x, y = _xgcd(b, a % b)
    return g, y, x - (a // b) * y


def real_period_quadrature(E: CurveModel):
    """Least positive real period by direct integration (independent oracle).

    With e the largest real root of f = 4x^3 + b2 x^2 + 2 b4 x + b6 and
    x = e + t^2 the period 2 int_e^oo dx/sqrt f becomes 4 int_0^oo dt/sqrt g.
    """
    if E.base is not None:
        E = E.over_Q()
    b2, b4, b6, _ = (mpmath.mpf(b.numerator) / b.denominator for b in E.b_invariants)
    roots = mpmath.polyroots([4, b2, 2 * b4, b6], maxsteps=200, extraprec=2 * mpmath.mp.prec)
    e = max(mpmath.re(r) for r in roots if abs(mpmath.im(r)) < mpmath.mpf(10) ** -20 * (1 + abs(r)))
    # f = 4 (x - e)(x^2 + beta x + gamma)
    beta = b2 / 4 + e
    gamma = 2 * b4 / 4 + beta * e

    def integrand(t):
        x = e + t * t
        return 4 / mpmath.sqrt(4 * (x * x + beta * x + gamma))

    return mpmath.quad(integrand, [0, 1, mpmath.inf])


def neron_real_period(E: CurveModel):
    """Omega(E) = least positive real period times the number of real components."""
    if E.base is not None:
        raise UnsupportedPeriodError("real period needs a curve over Q")
    if not is_minimal(E):
        raise NonMinimalModelError("model is not minimal; call minimal_model() first")
    L = period_lattice(E)
    return L.w1 * L.real_locus_components


# -------------------------------------------------------------------------
# equivariant period over K


@dataclass(frozen=True)
class PeriodData:
    omega_E: object  # real, vol(E(C)) / sqrt|D| for F = K
    omega_K: object  # complex Omega
    ideal: FracIdeal  # a(Omega)
    I_omega: int = 1

    def to_json(self) -> dict:
        return {
            "omega_E": mpmath.nstr(self.omega_E, 40),
            "omega_re": mpmath.nstr(mpmath.re(self.omega_K), 40),
            "omega_im": mpmath.nstr(mpmath.im(self.omega_K), 40),
            "ideal": self.ideal.to_json(),
            "I_omega": self.I_omega,
        }


def recognize_in_K(z, K: QuadField, denom_bound: int = 10**4, tol=None) -> QElem | None:
    """x + y w in K with denominators <= denom_bound and |value - z| < tol."""
    if tol is None:
        tol = mpmath.ldexp(1, -mpmath.mp.prec // 3)
    z = mpmath.mpmathify(z)
    w = mpmath.mpc(mpmath.mpf(K.disc) / 2, mpmath.sqrt(-K.disc) / 2)
    y = mpmath.im(z) / mpmath.im(w)
    x = mpmath.re(z) - y * mpmath.re(w)
    xr = _rat(x, denom_bound)
    yr = _rat(y, denom_bound)
    cand = QElem(K, xr, yr)
    if abs(cand.to_mpc() - z) > tol * max(1, abs(z)):
        return None
    return cand


def _rat(x, bound: int) -> Fraction:
    """Best rational approximation with denominator <= bound (continued fractions)."""
    s = mpmath.nstr(x, mpmath.mp.dps, strip_zeros=False, min_fixed=-mpmath.inf, max_fixed=mpmath.inf)
    return Fraction(s).limit_denominator(bound)


def equivariant_period(E: CurveModel, unit: QElem | None = None, denom_bound: int = 10**4) -> PeriodData:
    """Omega and a(Omega) for a curve over K of class number one.

    The period lattice L is an O_K-module of rank one; Omega is its shortest
    vector (times ``unit`` when given) and a(Omega) = L / Omega.
    """
    K = E.base
    if K is None:
        raise UnsupportedPeriodError("equivariant period needs a curve over K")
    if K.class_number() != 1:
        raise UnsupportedPeriodError("equivariant period needs class number one")
    if not is_minimal(E):
        raise NonMinimalModelError("model is not minimal over K; call minimal_model() first")
    L = period_lattice(E)
    w1, w2 = _reduce_basis(L.w1, L.w2)
    omega = w1 if unit is None else w1 * unit.to_mpc()
    t1 = recognize_in_K(w1 / omega, K, denom_bound)
    t2 = recognize_in_K(w2 / omega, K, denom_bound)
    if t1 is None or t2 is None:
        raise ArithmeticError("period lattice is not an O_K-lattice")
    ideal = FracIdeal.from_z_basis(K, [t1, t2])
    # volume of E(C) for the form 2 dx ^ dy = i dz ^ dz-bar is twice the covolume
    omega_E = 2 * L.covolume / mpmath.sqrt(-K.disc)
    return PeriodData(omega_E, omega, ideal, 1)


def period_norm_check(pd: PeriodData, omega_E=None):
    """omega_E = |Omega|^2 N(a(Omega)); returns (holds, residual)."""
    if omega_E is None:
        omega_E = pd.omega_E
    n = pd.ideal.norm()
    rhs = abs(pd.omega_K) ** 2 * mpmath.mpf(n.numerator) / n.denominator
    res = abs(omega_E - rhs)
    return bool(res < mpmath.ldexp(1, -mpmath.mp.prec // 2) * max(1, abs(omega_E))), res
