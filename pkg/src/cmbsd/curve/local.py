"""Completions of Q or of K at a finite prime, as Tate's algorithm sees them.

Each local object knows a uniformiser, the valuation, and the residue
field; residue-field elements are ints mod p for degree-one primes and pairs
(u, v) meaning u + v*w for inert primes of K.
"""

from __future__ import annotations

import math
from fractions import Fraction

import sympy

from ..qfield import (
    INERT,
    FracIdeal,
    QElem,
    QuadField,
    omega_root_mod,
    prime_above,
    primes_above,
    split_type,
)


def vp(x: Fraction | int, p: int) -> int | float:
    x = Fraction(x)
    if x == 0:
        return math.inf
    return sympy.multiplicity(p, x.numerator) - sympy.multiplicity(p, x.denominator)


class Local:
    """Shared residue-field logic; subclasses supply val/red/lift."""

    p: int
    q: int
    pi: object

    # subclass hooks -------------------------------------------------------
    def val(self, x) -> int | float:
        raise NotImplementedError

    def red(self, x):
        raise NotImplementedError

    def lift(self, r):
        raise NotImplementedError

    def rf_mul(self, x, y):
        raise NotImplementedError

    def rf_add(self, x, y):
        raise NotImplementedError

    def rf_elements(self):
        raise NotImplementedError

    rf_zero = 0
    rf_one = 1

    # generic --------------------------------------------------------------
    def pdiv(self, x) -> bool:
        return self.val(x) > 0

    def rf_pow(self, x, n: int):
        out, base = self.rf_one, x
        while n:
            if n & 1:
                out = self.rf_mul(out, base)
            base = self.rf_mul(base, base)
            n >>= 1
        return out

    def rf_inv(self, x):
        if x == self.rf_zero:
            raise ZeroDivisionError("inverse of 0 in residue field")
        return self.rf_pow(x, self.q - 2)

    def preduce(self, x):
        return self.lift(self.red(x))

    def pinv(self, x):
        return self.lift(self.rf_inv(self.red(x)))

    def proot(self, x, e: int):
        """Lift of the unique e-th root, e = residue characteristic."""
        assert e == self.p
        return self.lift(self.rf_pow(self.red(x), self.q // self.p))

    def rf_is_square(self, d) -> bool:
        if d == self.rf_zero:
            return True
        return self.rf_pow(d, (self.q - 1) // 2) == self.rf_one

    def quad_has_root(self, a, b, c) -> bool:
        a, b, c = self.red(a), self.red(b), self.red(c)
        if a == self.rf_zero:
            return b != self.rf_zero or c == self.rf_zero
        if self.p == 2:
            return any(self._eval(x, (c, b, a)) == self.rf_zero for x in self.rf_elements())
        disc = self.rf_add(self.rf_mul(b, b), self.rf_mul(self.red(-4), self.rf_mul(a, c)))
        return self.rf_is_square(disc)

    def cubic_nroots(self, b, c, d) -> int:
        """Number of distinct residue roots of x^3 + b x^2 + c x + d."""
        coeffs = (self.red(d), self.red(c), self.red(b), self.rf_one)
        return sum(1 for x in self.rf_elements() if self._eval(x, coeffs) == self.rf_zero)

    def _eval(self, x, coeffs):
        acc = self.rf_zero
        for co in reversed(coeffs):
            acc = self.rf_add(self.rf_mul(acc, x), co)
        return acc


class LocalQ(Local):
    """Q_p."""

    def __init__(self, p: int):
        self.p = self.q = p
        self.pi = Fraction(p)
        self.e = 1

    def val(self, x):
        return vp(x, self.p)

    def red(self, x):
        x = Fraction(x)
        if x.denominator % self.p == 0:
            raise ValueError(f"{x} is not {self.p}-integral")
        return x.numerator * pow(x.denominator, -1, self.p) % self.p

    def lift(self, r):
        return Fraction(r)

    def rf_mul(self, x, y):
        return x * y % self.p

    def rf_add(self, x, y):
        return (x + y) % self.p

    def rf_elements(self):
        return range(self.p)

    def rf_inv(self, x):
        return pow(x, -1, self.p)

    def rf_is_square(self, d) -> bool:
        return d == 0 or pow(d, (self.p - 1) // 2, self.p) == 1

    def cubic_nroots(self, b, c, d) -> int:
        if self.p < 600:
            return super().cubic_nroots(b, c, d)
        return _count_roots_mod_p([1, self.red(b), self.red(c), self.red(d)], self.p)

    def __repr__(self):
        return f"LocalQ({self.p})"


def _count_roots_mod_p(coeffs: list[int], p: int) -> int:
    """Distinct roots in F_p of a polynomial (degree of gcd with x^p - x)."""
    from sympy.polys.galoistools import gf_gcd, gf_pow_mod, gf_sub

    f = [c % p for c in coeffs]
    xp = gf_pow_mod([1, 0], p, f, p, sympy.ZZ)
    g = gf_gcd(f, gf_sub(xp, [1, 0], p, sympy.ZZ), p, sympy.ZZ)
    return len(g) - 1


class LocalK(Local):
    """Completion of K at a prime ideal P; requires P principal."""

    def __init__(self, P: FracIdeal):
        K = P.K
        self.K = K
        self.P = P
        n = int(P.norm())
        self.degree = 2 if P.a == 1 else 1
        self.p = n if self.degree == 1 else math.isqrt(n)
        self.q = n
        gen = P.generator()
        if gen is None:
            raise ValueError("local computations over K need a principal prime")
        self.pi = gen
        self.e = 2 if split_type(self.p, K) == "Ramified" else 1
        self.rho = omega_root_mod(self.p, K) if self.degree == 1 else None
        if self.degree == 1 and (self.pi.a + self.pi.b * self.rho) % self.p:
            # conjugate of the distinguished prime: use the other root of w
            self._red_slow_check()
        self._pi_conj = self.pi.conj()
        self._pi_norm = self.pi.norm()

    def _red_slow_check(self) -> bool:
        D, p = self.K.disc, self.p
        roots = [r for r in range(p) if (r * r - D * r + self.K.omega_norm) % p == 0]
        for r in roots:
            if (self.pi.a + self.pi.b * r) % p == 0:
                self.rho = r
                return True
        return False

    def val(self, x):
        if not isinstance(x, QElem):
            x = QElem(self.K, x, 0)
        if not x:
            return math.inf
        d = x.denominator()
        v = -self.e * vp(d, self.p)
        y = x * d
        # y is integral; strip factors of pi
        while True:
            z = y * self._pi_conj / self._pi_norm
            if not z.is_integral():
                return v
            y = z
            v += 1

    def red(self, x):
        if not isinstance(x, QElem):
            x = QElem(self.K, x, 0)
        p = self.p
        d = x.denominator()
        if d % p:
            return self._red_int(x)
        if self.val(x) < 0:
            raise ValueError(f"{x} is not integral at {self.P}")
        # x = alpha / (p^m d'); p^m = pi^(e m) * eps with eps a P-unit in O_K
        m = vp(d, p)
        dprime = d // p**m
        alpha = x * d
        pim = self.pi ** (self.e * m)
        beta = alpha / pim
        eps = QElem(self.K, p**m, 0) / pim
        assert beta.is_integral() and eps.is_integral()
        return self.rf_mul(self._red_int(beta), self.rf_inv(self._red_int(eps * dprime)))

    def _red_int(self, x: QElem):
        p = self.p
        a = x.a.numerator * pow(x.a.denominator, -1, p) % p
        b = x.b.numerator * pow(x.b.denominator, -1, p) % p
        if self.degree == 1:
            return (a + b * self.rho) % p
        return (a, b)

    def lift(self, r):
        if self.degree == 1:
            return QElem(self.K, r, 0)
        return QElem(self.K, r[0], r[1])

    @property
    def rf_zero(self):
        return 0 if self.degree == 1 else (0, 0)

    @property
    def rf_one(self):
        return 1 if self.degree == 1 else (1, 0)

    def rf_mul(self, x, y):
        p = self.p
        if self.degree == 1:
            return x * y % p
        a, b = x
        c, d = y
        bd = b * d
        return ((a * c - bd * self.K.omega_norm) % p, (a * d + b * c + bd * self.K.disc) % p)

    def rf_add(self, x, y):
        p = self.p
        if self.degree == 1:
            return (x + y) % p
        return ((x[0] + y[0]) % p, (x[1] + y[1]) % p)

    def rf_elements(self):
        if self.degree == 1:
            return range(self.p)
        return [(a, b) for a in range(self.p) for b in range(self.p)]

    def __repr__(self):
        return f"LocalK({self.P})"


def local_at(prime, base: QuadField | None) -> Local:
    """Local object for a rational prime (base Q) or a prime ideal of K."""
    if base is None:
        if isinstance(prime, FracIdeal):
            raise TypeError("prime ideal given for a curve over Q")
        return LocalQ(int(prime))
    if isinstance(prime, int):
        ps = primes_above(prime, base)
        if len(ps) != 1:
            raise ValueError(f"{prime} splits in {base}; pass a prime ideal")
        prime = ps[0]
    return LocalK(prime)


def bad_primes_K(K: QuadField, disc: QElem) -> list[FracIdeal]:
    """Prime ideals of K dividing the (integral) discriminant."""
    I = FracIdeal.generated_by(K, disc)
    n = I.norm()
    out = []
    for p in sorted(sympy.factorint(n.numerator * n.denominator)):
        for P in primes_above(p, K):
            if P.valuation(disc) != 0:
                out.append(P)
    return out


__all__ = ["Local", "LocalQ", "LocalK", "local_at", "vp", "bad_primes_K", "prime_above", "INERT"]
