"""Weierstrass models over Q or an imaginary quadratic field."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from ..qfield import QElem, QuadField


class SingularCurveError(ValueError):
    pass


class CurveParseError(ValueError):
    pass


class BadReductionError(ValueError):
    pass


@dataclass(frozen=True)
class Iso:
    """Change of variables x = u^2 x' + r, y = u^3 y' + s u^2 x' + t."""

    u: object = 1
    r: object = 0
    s: object = 0
    t: object = 0

    def then(self, other: "Iso") -> "Iso":
        """Apply ``self`` first, then ``other``."""
        u1, r1, s1, t1 = self.u, self.r, self.s, self.t
        u2, r2, s2, t2 = other.u, other.r, other.s, other.t
        return Iso(
            u1 * u2,
            r1 + u1 * u1 * r2,
            s1 + u1 * s2,
            t1 + u1 * u1 * s1 * r2 + u1 * u1 * u1 * t2,
        )

    def is_identity(self) -> bool:
        return self.u == 1 and self.r == 0 and self.s == 0 and self.t == 0


def _num(x, base: QuadField | None):
    if base is None:
        if isinstance(x, QElem):
            raise TypeError("K-element in a curve over Q")
        return Fraction(x)
    if isinstance(x, QElem):
        return x
    return QElem(base, x, 0)


class CurveModel:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over Q (base None) or K."""

    __slots__ = ("a1", "a2", "a3", "a4", "a6", "base", "__dict__")

    def __init__(self, ainvs, base: QuadField | None = None, check: bool = True):
        if len(ainvs) == 2:
            ainvs = (0, 0, 0, ainvs[0], ainvs[1])
        if len(ainvs) != 5:
            raise ValueError("expected 5 (or 2) Weierstrass coefficients")
        self.base = base
        self.a1, self.a2, self.a3, self.a4, self.a6 = (_num(a, base) for a in ainvs)
        if check and self.discriminant == 0:
            raise SingularCurveError(f"singular model {self.ainvs}")

    # invariants -----------------------------------------------------------
    @property
    def ainvs(self):
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @cached_property
    def b_invariants(self):
        a1, a2, a3, a4, a6 = self.ainvs
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return b2, b4, b6, b8

    @cached_property
    def c_invariants(self):
        b2, b4, b6, _ = self.b_invariants
        c4 = b2 * b2 - 24 * b4
        c6 = -b2 * b2 * b2 + 36 * b2 * b4 - 216 * b6
        return c4, c6

    @cached_property
    def discriminant(self):
        b2, b4, b6, b8 = self.b_invariants
        return -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    @cached_property
    def j_invariant(self):
        c4, _ = self.c_invariants
        return c4 * c4 * c4 / self.discriminant

    def is_over_Q(self) -> bool:
        return self.base is None

    def has_rational_coefficients(self) -> bool:
        if self.base is None:
            return True
        return all(a.is_rational() for a in self.ainvs)

    def rational_ainvs(self) -> tuple[Fraction, ...]:
        if self.base is None:
            return self.ainvs
        if not self.has_rational_coefficients():
            raise ValueError("model has non-rational coefficients")
        return tuple(a.a for a in self.ainvs)

    def base_change(self, K: QuadField) -> "CurveModel":
        return CurveModel(self.rational_ainvs(), base=K)

    def over_Q(self) -> "CurveModel":
        return CurveModel(self.rational_ainvs())

    def is_integral(self) -> bool:
        if self.base is None:
            return all(a.denominator == 1 for a in self.ainvs)
        return all(a.is_integral() for a in self.ainvs)

    # transformations ------------------------------------------------------
    def transform(self, iso: Iso) -> "CurveModel":
        u, r, s, t = iso.u, iso.r, iso.s, iso.t
        a1, a2, a3, a4, a6 = self.ainvs
        na1 = (a1 + 2 * s) / u
        na2 = (a2 - s * a1 + 3 * r - s * s) / u**2
        na3 = (a3 + r * a1 + 2 * t) / u**3
        na4 = (a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t) / u**4
        na6 = (a6 + r * a4 + r * r * a2 + r**3 - t * a3 - t * t - r * t * a1) / u**6
        return CurveModel((na1, na2, na3, na4, na6), base=self.base, check=False)

    def quadratic_twist(self, d: int) -> "CurveModel":
        """Twist by Q(sqrt(d)): d y^2 = x^3 + ... in short form."""
        c4, c6 = self.c_invariants
        return CurveModel((0, 0, 0, -27 * c4 * d * d, -54 * c6 * d**3), base=self.base)

    def short_model(self) -> "CurveModel":
        c4, c6 = self.c_invariants
        return CurveModel((0, 0, 0, -27 * c4, -54 * c6), base=self.base)

    # points ---------------------------------------------------------------
    def is_on(self, P) -> bool:
        if P is None:
            return True
        x, y = P
        a1, a2, a3, a4, a6 = self.ainvs
        return y * y + a1 * x * y + a3 * y == x**3 + a2 * x * x + a4 * x + a6

    def neg(self, P):
        if P is None:
            return None
        x, y = P
        return (x, -y - self.a1 * x - self.a3)

    def add(self, P, Q):
        if P is None:
            return Q
        if Q is None:
            return P
        a1, a2, a3, a4, a6 = self.ainvs
        x1, y1 = P
        x2, y2 = Q
        if x1 == x2:
            if y1 + y2 + a1 * x2 + a3 == 0:
                return None
            lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) / (2 * y1 + a1 * x1 + a3)
        else:
            lam = (y2 - y1) / (x2 - x1)
        nu = y1 - lam * x1
        x3 = lam * lam + a1 * lam - a2 - x1 - x2
        y3 = -(lam + a1) * x3 - nu - a3
        return (x3, y3)

    def mul(self, n: int, P):
        if n < 0:
            return self.mul(-n, self.neg(P))
        R, Q = None, P
        while n:
            if n & 1:
                R = self.add(R, Q)
            Q = self.add(Q, Q)
            n >>= 1
        return R

    def point_order(self, P, bound: int = 24) -> int | None:
        Q = P
        for n in range(1, bound + 1):
            if Q is None:
                return n
            Q = self.add(Q, P)
        return None

    # io -------------------------------------------------------------------
    def to_string(self) -> str:
        s = ",".join(_fmt(a) for a in self.rational_ainvs())
        if self.base is not None:
            s += f"@K:{self.base.disc}"
        return s

    def __eq__(self, other):
        return isinstance(other, CurveModel) and self.base == other.base and self.ainvs == other.ainvs

    def __hash__(self):
        return hash((self.base, tuple(self.ainvs)))

    def __repr__(self):
        field = "Q" if self.base is None else f"Q(sqrt({self.base.disc}))"
        return f"CurveModel([{', '.join(map(str, self.ainvs))}] over {field})"


def _fmt(a: Fraction) -> str:
    return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"


_CURVE_RE = re.compile(r"^\s*([^@]+?)\s*(?:@\s*K\s*:\s*(-?\d+)\s*)?$")


def parse_curve(text: str) -> CurveModel:
    """Parse ``"a1,a2,a3,a4,a6"`` with an optional ``"@K:D"`` base-field suffix."""
    m = _CURVE_RE.match(text)
    if not m:
        raise CurveParseError(f"cannot parse curve {text!r}")
    parts = [p.strip() for p in m.group(1).split(",")]
    if len(parts) != 5:
        raise CurveParseError(f"expected five coefficients, got {len(parts)} in {text!r}")
    try:
        ainvs = [Fraction(p) for p in parts]
    except (ValueError, ZeroDivisionError) as exc:
        raise CurveParseError(f"bad coefficient in {text!r}: {exc}") from None
    base = None
    if m.group(2) is not None:
        try:
            base = QuadField(int(m.group(2)))
        except ValueError as exc:
            raise CurveParseError(str(exc)) from None
    try:
        return CurveModel(ainvs, base=base)
    except SingularCurveError as exc:
        raise CurveParseError(str(exc)) from None


def invariants(E: CurveModel):
    """(c4, c6, discriminant, j)."""
    c4, c6 = E.c_invariants
    return c4, c6, E.discriminant, E.j_invariant


# -------------------------------------------------------------------------
# point counting over prime fields


def _reduce_mod(x: Fraction, p: int) -> int:
    if x.denominator % p == 0:
        raise BadReductionError(f"coefficient {x} is not {p}-integral")
    return x.numerator * pow(x.denominator, -1, p) % p


def count_points_mod(ainvs_mod_p, p: int) -> int:
    """#E(F_p) (point at infinity included) for integer coefficients mod p."""
    a1, a2, a3, a4, a6 = (int(a) % p for a in ainvs_mod_p)
    if p == 2:
        n = 1
        for x in range(2):
            for y in range(2):
                if (y * y + a1 * x * y + a3 * y - x**3 - a2 * x * x - a4 * x - a6) % 2 == 0:
                    n += 1
        return n
    b2 = (a1 * a1 + 4 * a2) % p
    b4 = (2 * a4 + a1 * a3) % p
    b6 = (a3 * a3 + 4 * a6) % p
    x = np.arange(p, dtype=np.int64)
    f = (4 * x) % p
    f = (f + b2) % p
    f = (f * x) % p
    f = (f + 2 * b4) % p
    f = (f * x) % p
    f = (f + b6) % p
    sq = np.zeros(p, dtype=np.int8)
    sq[(x * x) % p] = 1
    sq[0] = 0
    return int(1 + np.count_nonzero(f == 0) + 2 * int(sq[f].sum()))


def count_points(E: CurveModel, p: int) -> int:
    """#E(F_p) for a curve over Q with good reduction at p."""
    if not E.is_over_Q():
        E = E.over_Q()
    red = [_reduce_mod(a, p) for a in E.ainvs]
    if CurveModel(red, check=False).discriminant % p == 0:
        raise BadReductionError(f"bad reduction at {p}")
    return count_points_mod(red, p)


def ap(E: CurveModel, p: int) -> int:
    return p + 1 - count_points(E, p)
