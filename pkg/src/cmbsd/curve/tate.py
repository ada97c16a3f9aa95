"""Tate's algorithm, minimal models and conductors."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import sympy

from ..qfield import FracIdeal, QElem, QuadField, factor_ideal, primes_above
from .local import Local, LocalK, local_at, vp
from .model import CurveModel, Iso


class NonMinimalError(ValueError):
    pass


@dataclass(frozen=True)
class LocalData:
    """Reduction data of a curve at one finite prime."""

    prime: object
    kodaira: str
    cond_exp: int
    tamagawa: int
    disc_val: int
    tamagawa_ideal: FracIdeal | None = field(default=None, compare=False)
    split: bool | None = None  # multiplicative reduction only

    @property
    def good(self) -> bool:
        return self.kodaira == "I0"

    @property
    def additive(self) -> bool:
        return self.cond_exp >= 2

    def to_json(self) -> dict:
        p = self.prime
        out = {
            "p": p.to_json() if isinstance(p, FracIdeal) else int(p),
            "kodaira": self.kodaira,
            "f": self.cond_exp,
            "c": self.tamagawa,
        }
        out["c_ideal"] = self.tamagawa_ideal.to_json() if self.tamagawa_ideal is not None else None
        return out


def _as_local(prime, base) -> Local:
    if isinstance(prime, Local):
        return prime
    return local_at(prime, base)


def _tate(E: CurveModel, loc: Local, rescale: bool):
    """Core loop.  Returns (LocalData, model after the final change, Iso).

    With ``rescale`` the model is divided by the uniformiser whenever it is
    found to be non-minimal; otherwise NonMinimalError is raised.
    """
    p = loc.p
    pi = loc.pi
    pi2, pi3, pi4 = pi * pi, pi * pi * pi, pi**4
    C = E
    total = Iso()
    half = loc.pinv(2) if p != 2 else None

    def step(iso):
        nonlocal C, total
        C = C.transform(iso)
        total = total.then(iso)

    for a in C.ainvs:
        if loc.val(a) < 0:
            raise ValueError(f"model is not integral at {loc}")

    while True:
        a1, a2, a3, a4, a6 = C.ainvs
        b2, b4, b6, b8 = C.b_invariants
        c4, c6 = C.c_invariants
        vd = loc.val(C.discriminant)
        if vd == 0:
            return LocalData(_prime_label(loc), "I0", 0, 1, 0), C, total

        if p == 2:
            if loc.pdiv(b2):
                r = loc.proot(a4, 2)
                t = loc.proot(((r + a2) * r + a4) * r + a6, 2)
            else:
                tmp = loc.pinv(a1)
                r = tmp * a3
                t = tmp * (a4 + r * r)
        elif p == 3:
            if loc.pdiv(b2):
                r = loc.proot(-b6, 3)
            else:
                r = -loc.pinv(b2) * b4
            t = a1 * r + a3
        else:
            if loc.pdiv(c4):
                r = -loc.pinv(12) * b2
            else:
                r = -loc.pinv(12 * c4) * (c6 + b2 * c4)
            t = -half * (a1 * r + a3)
        step(Iso(1, loc.preduce(r), 0, loc.preduce(t)))
        a1, a2, a3, a4, a6 = C.ainvs
        b2, b4, b6, b8 = C.b_invariants
        assert loc.pdiv(a3) and loc.pdiv(a4) and loc.pdiv(a6)

        if not loc.pdiv(c4):
            split = loc.quad_has_root(1, a1, -a2)
            if split:
                cp = vd
            else:
                cp = 2 if vd % 2 == 0 else 1
            return LocalData(_prime_label(loc), f"I{vd}", 1, cp, vd, split=split), C, total

        if loc.val(a6) < 2:
            return LocalData(_prime_label(loc), "II", vd, 1, vd), C, total
        if loc.val(b8) < 3:
            return LocalData(_prime_label(loc), "III", vd - 1, 2, vd), C, total
        if loc.val(b6) < 3:
            cp = 3 if loc.quad_has_root(1, a3 / pi, -a6 / pi2) else 1
            return LocalData(_prime_label(loc), "IV", vd - 2, cp, vd), C, total

        if p == 2:
            s = loc.proot(a2, 2)
            t = pi * loc.proot(a6 / pi2, 2)
        elif p == 3:
            s, t = a1, a3
        else:
            # t stays unreduced: a3 is already divisible by pi
            s = loc.preduce(-a1 * half)
            t = -a3 * half
        step(Iso(1, 0, s, t))
        a1, a2, a3, a4, a6 = C.ainvs

        b = a2 / pi
        c = a4 / pi2
        d = a6 / pi3
        bb, cc, bc = b * b, c * c, b * c
        w = 27 * d * d - bb * cc + 4 * b * bb * d - 18 * bc * d + 4 * c * cc
        x = 3 * c - bb
        if loc.pdiv(w):
            sw = 3 if loc.pdiv(x) else 2
        else:
            sw = 1

        if sw == 1:
            cp = 1 + loc.cubic_nroots(b, c, d)
            return LocalData(_prime_label(loc), "I0*", vd - 4, cp, vd), C, total

        if sw == 2:
            if p == 2:
                r = loc.proot(c, 2)
            elif p == 3:
                r = c * loc.pinv(b)
            else:
                r = (bc - 9 * d) * loc.pinv(2 * x)
            step(Iso(1, pi * loc.preduce(r), 0, 0))
            a1, a2, a3, a4, a6 = C.ainvs
            ix, iy = 3, 3
            mx, my = pi2, pi2
            while True:
                a2t = a2 / pi
                a3t = a3 / my
                a4t = a4 / (pi * mx)
                a6t = a6 / (mx * my)
                if loc.pdiv(a3t * a3t + 4 * a6t):
                    if p == 2:
                        t = my * loc.proot(a6t, 2)
                    else:
                        t = my * loc.preduce(-a3t * half)
                    step(Iso(1, 0, 0, t))
                    a1, a2, a3, a4, a6 = C.ainvs
                    my = my * pi
                    iy += 1
                    a2t = a2 / pi
                    a3t = a3 / my
                    a4t = a4 / (pi * mx)
                    a6t = a6 / (mx * my)
                    if loc.pdiv(a4t * a4t - 4 * a6t * a2t):
                        if p == 2:
                            r = mx * loc.proot(a6t * loc.pinv(a2t), 2)
                        else:
                            r = mx * loc.preduce(-a4t * loc.pinv(2 * a2t))
                        step(Iso(1, r, 0, 0))
                        a1, a2, a3, a4, a6 = C.ainvs
                        mx = mx * pi
                        ix += 1
                    else:
                        cp = 4 if loc.quad_has_root(a2t, a4t, a6t) else 2
                        break
                else:
                    cp = 4 if loc.quad_has_root(1, a3t, -a6t) else 2
                    break
            n = ix + iy - 5
            return LocalData(_prime_label(loc), f"I{n}*", vd - ix - iy + 1, cp, vd), C, total

        # triple root
        if p == 2:
            r = b
        elif p == 3:
            r = loc.proot(-d, 3)
        else:
            r = -b * loc.pinv(3)
        step(Iso(1, pi * loc.preduce(r), 0, 0))
        a1, a2, a3, a4, a6 = C.ainvs
        a3t = a3 / pi2
        a6t = a6 / pi4
        if not loc.pdiv(a3t * a3t + 4 * a6t):
            cp = 3 if loc.quad_has_root(1, a3t, -a6t) else 1
            return LocalData(_prime_label(loc), "IV*", vd - 6, cp, vd), C, total
        if p == 2:
            t = -pi2 * loc.proot(a6t, 2)
        else:
            t = pi2 * loc.preduce(-a3t * half)
        step(Iso(1, 0, 0, t))
        a1, a2, a3, a4, a6 = C.ainvs
        if loc.val(a4) < 4:
            return LocalData(_prime_label(loc), "III*", vd - 7, 2, vd), C, total
        if loc.val(a6) < 6:
            return LocalData(_prime_label(loc), "II*", vd - 8, 1, vd), C, total
        if not rescale:
            raise NonMinimalError(
                f"model is not minimal at {_prime_label(loc)}; call minimal_model() first"
            )
        step(Iso(pi, 0, 0, 0))


def _prime_label(loc: Local):
    return loc.P if isinstance(loc, LocalK) else loc.p


def tate_algorithm(E: CurveModel, v, cm_field: QuadField | None = None) -> LocalData:
    """Kodaira symbol, conductor exponent and Tamagawa number at ``v``.

    ``v`` is a rational prime for curves over Q, or a prime ideal of K.  The
    model must be integral and minimal at ``v``.  When ``cm_field`` is given
    (or the base is K) the Tamagawa number is refined to an O_K-ideal.
    """
    loc = _as_local(v, E.base)
    data, _, _ = _tate(E, loc, rescale=False)
    K = E.base if E.base is not None else cm_field
    if K is not None:
        data = _with_tamagawa_ideal(data, K)
    return data


def _with_tamagawa_ideal(data: LocalData, K: QuadField) -> LocalData:
    from dataclasses import replace

    return replace(data, tamagawa_ideal=tamagawa_ideal(data.tamagawa, K))


def tamagawa_ideal(c: int, K: QuadField) -> FracIdeal | None:
    """The O_K-ideal of norm c among (1), (2), P with P^2 = (2) or P^2 = (3).

    Returns None when no ideal of this shape has norm c.
    """
    one = FracIdeal.unit(K)
    if c == 1:
        return one
    if c == 4:
        return FracIdeal.generated_by(K, 2)
    if c in (2, 3):
        for P in primes_above(c, K):
            if P * P == FracIdeal.generated_by(K, c):
                return P
    return None


# -------------------------------------------------------------------------
# minimal models


def _integralize(E: CurveModel) -> tuple[CurveModel, Iso]:
    """Scale by 1/u (u integer) so all coefficients become integral."""
    if E.base is None:
        dens = [a.denominator for a in E.ainvs]
    else:
        dens = [a.denominator() for a in E.ainvs]
    primes = set()
    for d in dens:
        primes |= set(sympy.factorint(d))
    m = 1
    for p in primes:
        k = 0
        for i, a in zip((1, 2, 3, 4, 6), E.ainvs):
            if E.base is None:
                v = vp(a, p)
            else:
                v = min(vp(a.a, p), vp(a.b, p))
            if v < 0:
                k = max(k, math.ceil(-v / i))
        m *= p**k
    if m == 1:
        return E, Iso()
    iso = Iso(Fraction(1, m) if E.base is None else QElem(E.base, Fraction(1, m)), 0, 0, 0)
    return E.transform(iso), iso


def _bad_places(E: CurveModel):
    if E.base is None:
        d = E.discriminant
        return sorted(sympy.factorint(abs(d.numerator)))
    I = FracIdeal.generated_by(E.base, E.discriminant)
    return [P for P, e in factor_ideal(I) if e > 0]


def minimal_model(E: CurveModel, return_iso: bool = False):
    """Global minimal model (over Q, reduced so a1, a3 in {0,1}, a2 in {-1,0,1}).

    Over K this needs class number one so that every prime is principal.
    """
    C, total = _integralize(E)
    for v in _bad_places(C):
        loc = _as_local(v, C.base)
        _, C2, iso = _tate(C, loc, rescale=True)
        if iso.u != 1:
            C, total = C2, total.then(iso)
    if C.base is None:
        red = _reduction_iso(C)
        C = C.transform(red)
        total = total.then(red)
    C = CurveModel(C.ainvs, base=C.base)
    if return_iso:
        return C, total
    return C


def _reduction_iso(C: CurveModel) -> Iso:
    a1, a2, a3, a4, a6 = (int(a) for a in C.ainvs)
    s = -(a1 - a1 % 2) // 2
    A = a2 - s * a1 - s * s
    r = -_round_div(A, 3)
    B = a3 + r * a1
    t = -(B - B % 2) // 2
    return Iso(1, Fraction(r), Fraction(s), Fraction(t))


def _round_div(a: int, b: int) -> int:
    q, rem = divmod(a, b)
    if 2 * rem > b:
        q += 1
    return q


def is_minimal(E: CurveModel) -> bool:
    if not E.is_integral():
        return False
    try:
        for v in _bad_places(E):
            _tate(E, _as_local(v, E.base), rescale=False)
    except NonMinimalError:
        return False
    return True


def local_data(E: CurveModel, cm_field: QuadField | None = None) -> list[LocalData]:
    """Tate data at every bad prime of an integral minimal model."""
    return [tate_algorithm(E, v, cm_field) for v in _bad_places(E)]


def conductor(E: CurveModel):
    """Conductor: an integer over Q, an ideal of O_K over K."""
    E = minimal_model(E)
    if E.base is None:
        N = 1
        for d in local_data(E):
            N *= d.prime**d.cond_exp
        return N
    out = FracIdeal.unit(E.base)
    for d in local_data(E):
        out = out * d.prime**d.cond_exp
    return out


def tamagawa_product(E: CurveModel) -> int:
    return math.prod(d.tamagawa for d in local_data(E))
