"""Exact arithmetic in an imaginary quadratic field K = Q(sqrt(D)).

Elements are written a + b*w with w = (D + sqrt(D))/2, so that Z[w] is the
ring of integers.  Fractional ideals are kept as ``scale * L`` where L is a
primitive integral ideal with Hermite basis {a, b + w}; this normal form is
unique, so ideal equality is plain tuple equality.

Binary quadratic forms give the class group; characters are stored as exact
exponents e in Q/Z standing for exp(2*pi*i*e).
"""

from __future__ import annotations

import cmath
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import sympy


class FieldMismatchError(ValueError):
    pass


def kronecker(D: int, p: int) -> int:
    """Kronecker symbol (D/p) for a prime p."""
    if p == 2:
        if D % 2 == 0:
            return 0
        return 1 if D % 8 in (1, 7) else -1
    r = D % p
    if r == 0:
        return 0
    return 1 if pow(r, (p - 1) // 2, p) == 1 else -1


def is_fundamental(D: int) -> bool:
    if D >= 0 or D == 1:
        return False
    if D % 4 == 1:
        return _squarefree(-D)
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and _squarefree(-m)
    return False


def _squarefree(n: int) -> bool:
    return all(e == 1 for e in sympy.factorint(n).values())


@dataclass(frozen=True)
class QuadField:
    """Imaginary quadratic field of fundamental discriminant ``disc``."""

    disc: int

    def __post_init__(self):
        if not is_fundamental(self.disc):
            raise ValueError(f"{self.disc} is not a negative fundamental discriminant")

    @property
    def omega_norm(self) -> int:
        return (self.disc * self.disc - self.disc) // 4

    @property
    def omega_complex(self) -> complex:
        return complex(self.disc / 2, math.sqrt(-self.disc) / 2)

    def elem(self, a=0, b=0) -> "QElem":
        return QElem(self, a, b)

    @property
    def one(self) -> "QElem":
        return QElem(self, 1, 0)

    @property
    def omega(self) -> "QElem":
        return QElem(self, 0, 1)

    def sqrt_disc(self) -> "QElem":
        # sqrt(D) = 2w - D
        return QElem(self, -self.disc, 2)

    def gaussian(self, re, im) -> "QElem":
        """Element re + im*i of Q(i); only valid for D = -4."""
        if self.disc != -4:
            raise ValueError("gaussian() needs D = -4")
        # i = w + 2
        return QElem(self, Fraction(re) + 2 * Fraction(im), im)

    def from_sqrt(self, re, coeff) -> "QElem":
        """Element re + coeff*sqrt(D)."""
        coeff = Fraction(coeff)
        return QElem(self, Fraction(re) - coeff * self.disc, 2 * coeff)

    def units(self) -> list["QElem"]:
        if self.disc == -4:
            return [self.elem(1), self.gaussian(0, 1), self.elem(-1), self.gaussian(0, -1)]
        if self.disc == -3:
            # 2 + w = (1 + sqrt(-3))/2 is a primitive sixth root of unity
            zeta6 = self.elem(2, 1)
            out, z = [], self.one
            for _ in range(6):
                out.append(z)
                z = z * zeta6
            return out
        return [self.one, -self.one]

    def class_number(self) -> int:
        return class_group(self.disc).order

    def __repr__(self):
        return f"QuadField({self.disc})"


def _coerce(K: QuadField, x) -> "QElem":
    if isinstance(x, QElem):
        if x.K != K:
            raise FieldMismatchError(f"{x.K} vs {K}")
        return x
    if isinstance(x, (int, Fraction)):
        return QElem(K, x, 0)
    return NotImplemented


class QElem:
    """Element a + b*w of K with rational a, b."""

    __slots__ = ("K", "a", "b")

    def __init__(self, K: QuadField, a=0, b=0):
        self.K = K
        self.a = a if isinstance(a, Fraction) else Fraction(a)
        self.b = b if isinstance(b, Fraction) else Fraction(b)

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        o = _coerce(self.K, other)
        if o is NotImplemented:
            return o
        return QElem(self.K, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QElem(self.K, -self.a, -self.b)

    def __sub__(self, other):
        o = _coerce(self.K, other)
        if o is NotImplemented:
            return o
        return QElem(self.K, self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        o = _coerce(self.K, other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QElem(self.K, self.a * other, self.b * other)
        o = _coerce(self.K, other)
        if o is NotImplemented:
            return o
        a, b, c, d = self.a, self.b, o.a, o.b
        bd = b * d
        return QElem(self.K, a * c - bd * self.K.omega_norm, a * d + b * c + bd * self.K.disc)

    __rmul__ = __mul__

    def conj(self) -> "QElem":
        return QElem(self.K, self.a + self.b * self.K.disc, -self.b)

    def norm(self) -> Fraction:
        a, b = self.a, self.b
        return a * a + a * b * self.K.disc + b * b * self.K.omega_norm

    def trace(self) -> Fraction:
        return 2 * self.a + self.b * self.K.disc

    def inverse(self) -> "QElem":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in K")
        c = self.conj()
        return QElem(self.K, c.a / n, c.b / n)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return QElem(self.K, self.a / other, self.b / other)
        o = _coerce(self.K, other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = _coerce(self.K, other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result, base = QElem(self.K, 1, 0), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, QElem):
            return self.K == other.K and self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.K.disc, self.a, self.b))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    # queries --------------------------------------------------------------
    def is_integral(self) -> bool:
        return self.a.denominator == 1 and self.b.denominator == 1

    def is_rational(self) -> bool:
        return self.b == 0

    def denominator(self) -> int:
        return math.lcm(self.a.denominator, self.b.denominator)

    def to_complex(self) -> complex:
        return complex(self.a) + complex(self.b) * self.K.omega_complex

    def to_mpc(self):
        import mpmath

        w = mpmath.mpc(mpmath.mpf(self.K.disc) / 2, mpmath.sqrt(-self.K.disc) / 2)
        return mpmath.mpf(self.a.numerator) / self.a.denominator + (
            mpmath.mpf(self.b.numerator) / self.b.denominator
        ) * w

    def sqrt_coords(self) -> tuple[Fraction, Fraction]:
        """(x, y) with self = x + y*sqrt(D)."""
        return self.a + self.b * Fraction(self.K.disc, 2), self.b / 2

    def __repr__(self):
        if self.b == 0:
            return f"{self.a}"
        return f"({self.a} + {self.b}*w)"

    def __str__(self):
        x, y = self.sqrt_coords()
        if self.K.disc == -4:
            return f"{x}{'+' if y >= 0 else '-'}{abs(2 * y)}i" if y else f"{x}"
        if y == 0:
            return f"{x}"
        return f"{x}{'+' if y >= 0 else '-'}{abs(y)}*sqrt({self.K.disc})"


def elem_norm(x: QElem, K: QuadField | None = None) -> Fraction:
    if K is not None and x.K != K:
        raise FieldMismatchError(f"{x.K} vs {K}")
    return x.norm()


# -------------------------------------------------------------------------
# Hermite normal form in rank 2


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def hnf2(vectors: Iterable[tuple[int, int]]) -> tuple[int, int, int]:
    """Hermite basis (A,0),(B,C) of a full-rank sublattice of Z^2.

    Returns (A, B, C) with A, C > 0 and 0 <= B < A.
    """
    pivot = None
    rest = 0
    for x, y in vectors:
        if y == 0:
            rest = math.gcd(rest, x)
            continue
        if pivot is None:
            pivot = (x, y)
            continue
        px, py = pivot
        g, u, v = _egcd(py, y)
        rest = math.gcd(rest, (y // g) * px - (py // g) * x)
        pivot = (u * px + v * x, g)
    if pivot is None or rest == 0:
        raise ValueError("vectors do not span a rank-2 lattice")
    px, py = pivot
    if py < 0:
        px, py = -px, -py
    return rest, px % rest, py


# -------------------------------------------------------------------------
# fractional ideals


class FracIdeal:
    """Fractional ideal ``scale * (Z*a + Z*(b + w))`` of O_K.

    The integral part is primitive and in Hermite normal form (0 <= b < a),
    which makes the representation unique.
    """

    __slots__ = ("K", "scale", "a", "b")

    def __init__(self, K: QuadField, scale, a: int, b: int):
        self.K = K
        self.scale = Fraction(scale)
        self.a = int(a)
        self.b = int(b)
        if self.scale <= 0 or self.a <= 0 or not 0 <= self.b < self.a:
            raise ValueError(f"malformed ideal data scale={scale} a={a} b={b}")
        nb = self.b * self.b + self.b * K.disc + K.omega_norm
        if nb % self.a:
            raise ValueError(f"Z-module <{a}, {b}+w> is not an O_K-ideal")

    @property
    def hnf(self) -> tuple[int, int, int]:
        return (self.a, self.b, 1)

    # construction ---------------------------------------------------------
    @classmethod
    def from_z_basis(cls, K: QuadField, gens: Sequence[QElem]) -> "FracIdeal":
        """Ideal spanned over Z by ``gens`` (which must already form an ideal)."""
        gens = [_coerce(K, g) for g in gens]
        d = math.lcm(*(g.denominator() for g in gens))
        vecs = [(int(g.a * d), int(g.b * d)) for g in gens]
        A, B, C = hnf2(vecs)
        if A % C or B % C:
            raise ValueError("Z-span is not an O_K-ideal")
        a = A // C
        return cls(K, Fraction(C, d), a, (B // C) % a)

    @classmethod
    def generated_by(cls, K: QuadField, *gens) -> "FracIdeal":
        elems = [_coerce(K, g) for g in gens]
        zgens = []
        for g in elems:
            if g:
                zgens.extend([g, g * K.omega])
        return cls.from_z_basis(K, zgens)

    @classmethod
    def unit(cls, K: QuadField) -> "FracIdeal":
        return cls(K, 1, 1, 0)

    def z_basis(self) -> tuple[QElem, QElem]:
        s = self.scale
        return QElem(self.K, s * self.a, 0), QElem(self.K, s * self.b, s)

    # group law ------------------------------------------------------------
    def _check(self, other: "FracIdeal"):
        if not isinstance(other, FracIdeal):
            raise TypeError("expected FracIdeal")
        if other.K != self.K:
            raise FieldMismatchError(f"{self.K} vs {other.K}")

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, QElem)):
            other = FracIdeal.generated_by(self.K, other)
        self._check(other)
        prods = [x * y for x in self.z_basis() for y in other.z_basis()]
        return FracIdeal.from_z_basis(self.K, prods)

    __rmul__ = __mul__

    def conj(self) -> "FracIdeal":
        return FracIdeal.from_z_basis(self.K, [x.conj() for x in self.z_basis()])

    def inverse(self) -> "FracIdeal":
        c = self.conj()
        n = self.norm()
        return FracIdeal(self.K, c.scale / n, c.a, c.b)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, QElem)):
            other = FracIdeal.generated_by(self.K, other)
        return self * other.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = FracIdeal.unit(self.K)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, FracIdeal):
            return NotImplemented
        return (self.K, self.scale, self.a, self.b) == (other.K, other.scale, other.a, other.b)

    def __hash__(self):
        return hash((self.K.disc, self.scale, self.a, self.b))

    # queries --------------------------------------------------------------
    def norm(self) -> Fraction:
        return self.scale * self.scale * self.a

    def is_integral(self) -> bool:
        return all(x.is_integral() for x in self.z_basis())

    def contains(self, x) -> bool:
        x = _coerce(self.K, x) / self.scale
        if not x.is_integral():
            return False
        return (x.a - x.b * self.b) % self.a == 0

    def __contains__(self, x):
        return self.contains(x)

    def divides(self, other: "FracIdeal") -> bool:
        """self | other, i.e. other is contained in self."""
        return all(self.contains(g) for g in other.z_basis())

    def rational_generator(self) -> Fraction | None:
        """q > 0 with self = (q), or None when self is not generated by a rational."""
        if self.a == 1:
            return self.scale
        return None

    def generator(self) -> QElem | None:
        """A generator when the ideal is principal (shortest lattice vector)."""
        x, y = reduced_basis(self)
        if x.norm() == self.norm():
            return x
        return None

    def is_principal(self) -> bool:
        return self.generator() is not None

    def residue(self, x: QElem) -> tuple[int, int]:
        """Canonical key of x modulo an integral ideal (x integral)."""
        if not self.is_integral():
            raise ValueError("residues need an integral ideal")
        (A, _), (B, C) = ((self.scale * self.a, 0), (self.scale * self.b, self.scale))
        A, B, C = int(A), int(B), int(C)
        xa, xb = int(x.a), int(x.b)
        k = xb // C
        xb -= k * C
        xa -= k * B
        return xa % A, xb

    def valuation(self, x) -> int:
        """v_P(x) for a prime ideal P = self and x in K^*."""
        x = _coerce(self.K, x)
        if not x:
            raise ValueError("valuation of zero")
        return factor_valuation(FracIdeal.generated_by(self.K, x), self)

    def to_json(self) -> dict:
        s = self.scale
        return {"scale": f"{s.numerator}/{s.denominator}", "hnf": [self.a, self.b, 1]}

    @classmethod
    def from_json(cls, K: QuadField, data: dict) -> "FracIdeal":
        a, b, c = data["hnf"]
        if c != 1:
            raise ValueError("hnf must be primitive with c = 1")
        return cls(K, Fraction(data["scale"]), a, b)

    def __repr__(self):
        return f"FracIdeal(D={self.K.disc}, scale={self.scale}, hnf=[{self.a},{self.b},1])"


def ideal_norm(I: FracIdeal) -> Fraction:
    return I.norm()


def ideal_mul(I: FracIdeal, J: FracIdeal) -> FracIdeal:
    return I * J


def ideal_inv(I: FracIdeal) -> FracIdeal:
    return I.inverse()


def ideal_eq(I: FracIdeal, J: FracIdeal) -> bool:
    I._check(J)
    return I == J


def reduced_basis(I: FracIdeal) -> tuple[QElem, QElem]:
    """Lagrange-Gauss reduced Z-basis of I under the norm form."""
    u, v = I.z_basis()

    def dot(x: QElem, y: QElem) -> Fraction:
        return (x * y.conj()).trace() / 2

    if v.norm() < u.norm():
        u, v = v, u
    while True:
        m = dot(u, v) / u.norm()
        q = math.floor(m + Fraction(1, 2))
        v = v - u * q
        if v.norm() >= u.norm():
            return u, v
        u, v = v, u


def factor_valuation(I: FracIdeal, P: FracIdeal) -> int:
    """Exponent of the prime ideal P in the fractional ideal I."""
    v = 0
    Pinv = P.inverse()
    # clear denominators first so that the loop below only divides
    d = I.scale.denominator
    if d > 1:
        v -= factor_valuation(FracIdeal.generated_by(I.K, d), P)
        I = I * d
    while P.divides(I):
        I = I * Pinv
        v += 1
    return v


# -------------------------------------------------------------------------
# splitting of rational primes

SPLIT, INERT, RAMIFIED = "Split", "Inert", "Ramified"


def split_type(p: int, K: QuadField) -> str:
    k = kronecker(K.disc, p)
    return {1: SPLIT, -1: INERT, 0: RAMIFIED}[k]


def omega_root_mod(p: int, K: QuadField) -> int | None:
    """Root rho of the minimal polynomial of w mod p fixed by the deterministic rule.

    For odd split p, r is the smaller square root of D mod p and rho = (D + r)/2.
    """
    D = K.disc
    st = split_type(p, K)
    if st == INERT:
        return None
    if p == 2:
        if st == SPLIT:
            return ((D + 1) // 2) % 2
        roots = [x for x in (0, 1) if (x * x - D * x + K.omega_norm) % 2 == 0]
        return roots[0]
    if st == RAMIFIED:
        return (D * pow(2, -1, p)) % p
    r = min(sympy.sqrt_mod(D % p, p, all_roots=True))
    return ((D + r) * pow(2, -1, p)) % p


@lru_cache(maxsize=None)
def prime_above(p: int, K: QuadField) -> FracIdeal:
    """A prime ideal of O_K above p (the distinguished one when p splits)."""
    rho = omega_root_mod(p, K)
    if rho is None:
        return FracIdeal(K, p, 1, 0)
    return FracIdeal(K, 1, p, (-rho) % p)


def primes_above(p: int, K: QuadField) -> list[FracIdeal]:
    P = prime_above(p, K)
    st = split_type(p, K)
    if st == SPLIT:
        return [P, P.conj()]
    return [P]


def residue_degree(P: FracIdeal) -> int:
    return 2 if P.a == 1 else 1


def prime_below(P: FracIdeal) -> int:
    n = P.norm()
    return int(n) if residue_degree(P) == 1 else math.isqrt(int(n))


def factor_ideal(I: FracIdeal) -> list[tuple[FracIdeal, int]]:
    """Prime factorisation of a fractional ideal."""
    K = I.K
    num = I.norm().numerator * I.scale.numerator
    den = I.norm().denominator * I.scale.denominator
    out = []
    for p in sorted(set(sympy.factorint(num)) | set(sympy.factorint(den))):
        for P in primes_above(p, K):
            e = factor_valuation(I, P)
            if e:
                out.append((P, e))
    return out


# -------------------------------------------------------------------------
# class group via binary quadratic forms


def reduce_form(f: tuple[int, int, int]) -> tuple[int, int, int]:
    a, b, c = f
    while True:
        if not -a < b <= a:
            r = (a - b) // (2 * a)
            b, c = b + 2 * r * a, a * r * r + b * r + c
        if a > c or (a == c and b < 0):
            a, b, c = c, -b, a
            continue
        return a, b, c


def compose_forms(f1, f2) -> tuple[int, int, int]:
    """Gauss composition of primitive forms of the same discriminant, reduced."""
    a1, b1, c1 = f1
    a2, b2, c2 = f2
    if a1 > a2:
        a1, b1, c1, a2, b2, c2 = a2, b2, c2, a1, b1, c1
    s = (b1 + b2) // 2
    n = b2 - s
    if a2 % a1 == 0:
        y1, d = 0, a1
    else:
        d, u, _ = _egcd(a2, a1)
        y1 = u
    if s % d == 0:
        y2, x2, d1 = -1, 0, d
    else:
        d1, x2, y2 = _egcd(s, d)
        y2 = -y2
    v1, v2 = a1 // d1, a2 // d1
    r = (y1 * y2 * n - x2 * c2) % v1
    b3 = b2 + 2 * v2 * r
    a3 = v1 * v2
    D = b1 * b1 - 4 * a1 * c1
    c3 = (b3 * b3 - D) // (4 * a3)
    return reduce_form((a3, b3, c3))


def reduced_forms(D: int) -> list[tuple[int, int, int]]:
    forms = []
    amax = math.isqrt(-D // 3)
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            if (b - D) % 2:
                continue
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if math.gcd(math.gcd(a, b), c) != 1:
                continue
            forms.append((a, b, c))
    return forms


def principal_form(D: int) -> tuple[int, int, int]:
    return (1, D % 2, (D % 2 - D) // 4)


@dataclass(frozen=True)
class ClassGroup:
    disc: int
    forms: tuple[tuple[int, int, int], ...]
    table: tuple[tuple[int, ...], ...]
    identity: int = 0

    @property
    def order(self) -> int:
        return len(self.forms)

    def index(self, f) -> int:
        return self.forms.index(reduce_form(f))

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    def inverse(self, i: int) -> int:
        a, b, c = self.forms[i]
        return self.index((a, -b, c))

    def power(self, i: int, k: int) -> int:
        out = self.identity
        for _ in range(k % self.exponent_bound()):
            out = self.table[out][i]
        return out

    def exponent_bound(self) -> int:
        return max(1, self.order)

    def element_order(self, i: int) -> int:
        k, x = 1, i
        while x != self.identity:
            x = self.table[x][i]
            k += 1
        return k

    def form_to_ideal(self, i: int) -> FracIdeal:
        a, b, _ = self.forms[i]
        K = QuadField(self.disc)
        # (-b + sqrt(D))/2 = w - (D + b)/2
        return FracIdeal.from_z_basis(K, [K.elem(a), K.elem(-(self.disc + b) // 2, 1)])


@lru_cache(maxsize=64)
def class_group(D: int) -> ClassGroup:
    """Class group of discriminant D from reduced forms and Gauss composition."""
    if not is_fundamental(D):
        raise ValueError(f"{D} is not a negative fundamental discriminant")
    if D < -10**6:
        raise ValueError("discriminant beyond the supported range |D| <= 10^6")
    forms = reduced_forms(D)
    pf = principal_form(D)
    forms.sort(key=lambda f: (f != pf, f))
    pos = {f: k for k, f in enumerate(forms)}
    table = tuple(
        tuple(pos[compose_forms(f, g)] for g in forms) for f in forms
    )
    return ClassGroup(D, tuple(forms), table, 0)


# -------------------------------------------------------------------------
# characters


@dataclass(frozen=True)
class ClassChar:
    """Character of a class group; values[i] = e means exp(2*pi*i*e)."""

    group: ClassGroup = field(repr=False)
    values: tuple[Fraction, ...]

    def __call__(self, i: int) -> complex:
        return cmath.exp(2j * math.pi * float(self.values[i]))

    def mp_value(self, i: int):
        import mpmath

        e = self.values[i]
        return mpmath.expjpi(2 * mpmath.mpf(e.numerator) / e.denominator)

    def is_trivial(self) -> bool:
        return all(e == 0 for e in self.values)

    def is_real(self) -> bool:
        return all(e in (0, Fraction(1, 2)) for e in self.values)

    def conj(self) -> "ClassChar":
        return ClassChar(self.group, tuple((-e) % 1 for e in self.values))

    def __mul__(self, other: "ClassChar") -> "ClassChar":
        return ClassChar(self.group, tuple((x + y) % 1 for x, y in zip(self.values, other.values)))


def characters(G: ClassGroup) -> list[ClassChar]:
    """All h characters of G, built by extending along a chain of subgroups.

    Values are exact elements of Q/Z.
    """
    members = [G.identity]
    chars: list[dict[int, Fraction]] = [{G.identity: Fraction(0)}]
    inside = {G.identity}
    for g in range(G.order):
        if g in inside:
            continue
        # smallest k with g^k in the current subgroup H
        k, x = 1, g
        while x not in inside:
            x = G.mul(x, g)
            k += 1
        gk = x
        cosets = []
        y = G.identity
        for j in range(k):
            cosets.append([G.mul(h, y) for h in members])
            y = G.mul(y, g)
        new_chars = []
        for chi in chars:
            base = chi[gk]
            for r in range(k):
                zeta = (base + r) / k  # k-th roots of chi(g^k)
                ext = {}
                for j in range(k):
                    for h, hy in zip(members, cosets[j]):
                        ext[hy] = (chi[h] + j * zeta) % 1
                new_chars.append(ext)
        members = [e for c in cosets for e in c]
        inside = set(members)
        chars = new_chars
    return [ClassChar(G, tuple(c[i] for i in range(G.order))) for c in chars]


def orthogonality_exact(chi: ClassChar, psi: ClassChar) -> int:
    """sum_C chi(C) conj(psi(C)) evaluated exactly.

    The values of chi * conj(psi) form a subgroup mu_d hit equally often, so
    the sum is h when d = 1 and 0 otherwise; the equidistribution is checked.
    """
    prod = [(x - y) % 1 for x, y in zip(chi.values, psi.values)]
    counts = Counter(prod)
    d = len(counts)
    expected = {Fraction(k, d) for k in range(d)}
    if set(counts) != expected or len(set(counts.values())) != 1:
        raise ArithmeticError("character values are not equidistributed on mu_d")
    return len(prod) if d == 1 else 0
