"""Complex multiplication: CM detection, the Hecke character, Dirichlet coefficients.

For a curve E/Q with CM by O_K the L-function is that of a Hecke character psi
of K: L(E/Q, s) = L(psi, s).  At a split prime p of good reduction psi(P) is
the generator of P with trace a_p, where P is the distinguished prime above p.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from functools import lru_cache

import mpmath
import numpy as np
import sympy

from .curve import BadReductionError, CurveModel, count_points, local_data, minimal_model
from .curve.tate import LocalData
from .qfield import (
    INERT,
    RAMIFIED,
    SPLIT,
    FracIdeal,
    QElem,
    QuadField,
    factor_valuation,
    prime_above,
    split_type,
)

# discriminants of the imaginary quadratic orders of class number one
CM_DISCS = (-3, -4, -7, -8, -11, -12, -16, -19, -27, -28, -43, -67, -163)
MAXIMAL_DISCS = (-3, -4, -7, -8, -11, -19, -43, -67, -163)


class NoCMError(ValueError):
    pass


class UnsupportedCMError(ValueError):
    pass


@lru_cache(maxsize=1)
def cm_j_table() -> dict[int, int]:
    """j((d + sqrt d)/2) for every class-number-one order, rounded from 40 digits."""
    table = {}
    with mpmath.workdps(60):
        for d in CM_DISCS:
            tau = (d + mpmath.sqrt(mpmath.mpf(d))) / 2
            j = 1728 * mpmath.kleinj(tau)
            jr = int(mpmath.nint(mpmath.re(j)))
            if abs(j - jr) > mpmath.mpf(10) ** -30:
                raise ArithmeticError(f"j at discriminant {d} is not an integer: {j}")
            table[d] = jr
    return table


def _fundamental_part(d: int) -> int:
    for D in MAXIMAL_DISCS:
        if d % D == 0 and sympy.sqrt(sympy.Integer(d // D)).is_integer:
            return D
    raise ValueError(d)


@dataclass(frozen=True)
class CMData:
    disc: int  # discriminant of the endomorphism ring
    j_matched: int

    @property
    def maximal(self) -> bool:
        return self.disc in MAXIMAL_DISCS

    @property
    def field_disc(self) -> int:
        return _fundamental_part(self.disc)

    @property
    def field(self) -> QuadField:
        return QuadField(self.field_disc)


def detect_cm(E: CurveModel) -> CMData | None:
    """CM data when j(E) is one of the thirteen rational CM j-invariants."""
    if E.base is not None:
        if not E.has_rational_coefficients():
            return None
        E = E.over_Q()
    j = E.j_invariant
    if j.denominator != 1:
        return None
    for d, jd in cm_j_table().items():
        if jd == j:
            return CMData(d, jd)
    return None


# -------------------------------------------------------------------------
# Hecke character


@dataclass
class HeckeChar:
    """psi attached to a CM curve over Q (values psi(P) in O_K)."""

    field: QuadField
    conductor: FracIdeal
    curve_ref: CurveModel
    prime_values: dict = field(default_factory=dict, repr=False)
    bad_primes: frozenset = frozenset()
    local: dict = field(default_factory=dict, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    @property
    def curve_conductor(self) -> int:
        return int(abs(self.field.disc) * self.conductor.norm())

    def __call__(self, I: FracIdeal) -> QElem:
        return psi_of_ideal(self, I)


def hecke_character(E: CurveModel) -> HeckeChar:
    """Build psi for a curve over Q (or a base change of one) with CM by O_K."""
    if E.base is not None:
        E = E.over_Q()
    cmd = detect_cm(E)
    if cmd is None:
        raise NoCMError("curve has no complex multiplication")
    if not cmd.maximal:
        raise UnsupportedCMError(f"CM by the non-maximal order of discriminant {cmd.disc}")
    K = cmd.field
    Em = minimal_model(E)
    locs = local_data(Em)
    N = 1
    for d in locs:
        N *= d.prime**d.cond_exp
    f = hecke_conductor(N, K)
    return HeckeChar(
        field=K,
        conductor=f,
        curve_ref=Em,
        bad_primes=frozenset(d.prime for d in locs),
        local={d.prime: d for d in locs},
    )


def hecke_conductor(N: int, K: QuadField) -> FracIdeal:
    """The conjugation-stable ideal f with |D| N(f) = N."""
    D = K.disc
    if N % abs(D):
        raise ValueError(f"conductor {N} is not divisible by |D| = {abs(D)}")
    m = N // abs(D)
    out = FracIdeal.unit(K)
    for p, e in sympy.factorint(m).items():
        if split_type(p, K) == RAMIFIED:
            out = out * prime_above(p, K) ** e
        else:
            if e % 2:
                raise ValueError(f"odd exponent of unramified {p} in N/|D|")
            out = out * FracIdeal.generated_by(K, p ** (e // 2))
    return out


def _trace_candidates(K: QuadField, g: QElem):
    out = {}
    for u in K.units():
        pi = u * g
        out.setdefault(int(pi.trace()), []).append(pi)
    return out


def _ec_mul_mod(n: int, P, a, p):
    """n*P on y^2 + a1 xy + a3 y = x^3 + ... over F_p; None is the identity."""
    a1, a2, a3, a4, a6 = a

    def add(P, Q):
        if P is None:
            return Q
        if Q is None:
            return P
        x1, y1 = P
        x2, y2 = Q
        if x1 == x2:
            if (y1 + y2 + a1 * x2 + a3) % p == 0:
                return None
            lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) * pow(2 * y1 + a1 * x1 + a3, -1, p)
        else:
            lam = (y2 - y1) * pow(x2 - x1, -1, p)
        lam %= p
        x3 = (lam * lam + a1 * lam - a2 - x1 - x2) % p
        y3 = (-(lam + a1) * x3 - (y1 - lam * x1) - a3) % p
        return (x3, y3)

    R = None
    while n:
        if n & 1:
            R = add(R, P)
        P = add(P, P)
        n >>= 1
    return R


def _points_mod(a, p, count):
    """A few deterministic affine points on the reduction."""
    a1, a2, a3, a4, a6 = a
    b2 = (a1 * a1 + 4 * a2) % p
    b4 = (2 * a4 + a1 * a3) % p
    b6 = (a3 * a3 + 4 * a6) % p
    inv2 = pow(2, -1, p)
    out = []
    for x in range(p):
        f = (4 * x**3 + b2 * x * x + 2 * b4 * x + b6) % p
        if f == 0 or pow(f, (p - 1) // 2, p) != 1:
            continue
        s = sympy.sqrt_mod(f, p)
        y = (s - a1 * x - a3) * inv2 % p
        out.append((x, y))
        if len(out) == count:
            break
    return out


def frobenius_trace_cm(chi: HeckeChar, p: int) -> QElem:
    """psi(P) for the distinguished prime P above a split good p."""
    K = chi.field
    P = prime_above(p, K)
    g = P.generator()
    cands = _trace_candidates(K, g)
    if p < 50:
        return cands[p + 1 - count_points(chi.curve_ref, p)][0]
    a = [int(c.numerator * pow(c.denominator, -1, p) % p) for c in chi.curve_ref.ainvs]
    alive = dict(cands)
    for pt in _points_mod(a, p, 8):
        alive = {t: v for t, v in alive.items() if _ec_mul_mod(p + 1 - t, pt, a, p) is None}
        if len(alive) == 1:
            break
    if len(alive) != 1:
        t = p + 1 - count_points(chi.curve_ref, p)
        return cands[t][0]
    return next(iter(alive.values()))[0]


def psi_at_prime(chi: HeckeChar, p) -> QElem:
    """psi(P) where P is a split prime of good reduction.

    ``p`` is a rational prime (meaning the distinguished prime above it) or
    a prime ideal; the conjugate prime gets the conjugate value.
    """
    K = chi.field
    if isinstance(p, FracIdeal):
        P = p
        q = int(P.norm())
        if split_type(q, K) != SPLIT or P.a == 1:
            raise ValueError(f"{P} is not a split prime")
        conj = P != prime_above(q, K)
    else:
        q, conj = int(p), False
    if split_type(q, K) != SPLIT:
        raise ValueError(f"{q} is not split in {K}; psi is read through a_(p^2) there")
    if q in chi.bad_primes:
        raise BadReductionError(f"bad reduction at {q}")
    val = chi.prime_values.get(q)
    if val is None:
        val = frobenius_trace_cm(chi, q)
        with chi._lock:
            chi.prime_values[q] = val
    return val.conj() if conj else val


def psi_of_ideal(chi: HeckeChar, I: FracIdeal) -> QElem:
    """psi on an integral ideal; zero when I meets the conductor."""
    K = chi.field
    out = K.one
    n = int(I.norm())
    for p in sympy.factorint(n):
        st = split_type(p, K)
        if p in chi.bad_primes:
            return K.elem(0)
        if st == SPLIT:
            P = prime_above(p, K)
            e1 = factor_valuation(I, P)
            e2 = factor_valuation(I, P.conj())
            v = psi_at_prime(chi, p)
            out = out * v**e1 * v.conj() ** e2
        elif st == INERT:
            e = sympy.multiplicity(p, n) // 2
            # a_p = 0 and a_(p^2) = -2p force psi((p)) = -p
            out = out * QElem(K, -p) ** e
        else:
            raise UnsupportedCMError(f"ramified prime {p} of good reduction")
    return out


def epsilon(chi: HeckeChar, alpha: QElem) -> QElem:
    """The unit psi((alpha)) / alpha for alpha prime to the conductor."""
    return psi_of_ideal(chi, FracIdeal.generated_by(chi.field, alpha)) / alpha


# -------------------------------------------------------------------------
# Dirichlet coefficients of L(E/Q, s) = L(psi, s)


def bad_ap(loc: LocalData) -> int:
    if loc.cond_exp >= 2:
        return 0
    return 1 if loc.split else -1


def prime_ap(chi: HeckeChar, p: int) -> int:
    if p in chi.bad_primes:
        return bad_ap(chi.local[p])
    st = split_type(p, chi.field)
    if st == INERT:
        return 0
    if st == RAMIFIED:
        return p + 1 - count_points(chi.curve_ref, p)
    return int(psi_at_prime(chi, p).trace())


def dirichlet_coeffs(chi: HeckeChar, X: int) -> np.ndarray:
    """a_0..a_X as int64 (a_0 = 0 is a placeholder so that a[n] = a_n)."""
    if X > 10**7:
        raise ValueError("X must be at most 10^7")
    a = np.zeros(X + 1, dtype=np.int64)
    if X < 1:
        return a
    a[1] = 1
    for p in sympy.primerange(2, X + 1):
        p = int(p)
        ap = prime_ap(chi, p)
        good = p not in chi.bad_primes
        # prime powers
        pk = [1, p]
        vals = [1, ap]
        while pk[-1] * p <= X:
            nxt = ap * vals[-1] - (p * vals[-2] if good else 0)
            pk.append(pk[-1] * p)
            vals.append(nxt)
        # multiply into every m coprime to p that is already filled
        m_max = X // p
        base = a[1 : m_max + 1].copy()
        idx = np.arange(1, m_max + 1)
        coprime = (idx % p) != 0
        for q, v in zip(pk[1:], vals[1:]):
            lim = X // q
            sel = coprime[:lim]
            ms = idx[:lim][sel]
            a[ms * q] = base[: lim][sel] * v
    return a


def dirichlet_coeffs_recursive(chi: HeckeChar, X: int) -> list[int]:
    """Same coefficients from a plain multiplicative recursion (oracle)."""
    a = [0] * (X + 1)
    if X >= 1:
        a[1] = 1
    for n in range(2, X + 1):
        f = sympy.factorint(n)
        val = 1
        for p, e in f.items():
            ap = prime_ap(chi, p)
            good = p not in chi.bad_primes
            prev, cur = 1, ap
            for _ in range(e - 1):
                prev, cur = cur, ap * cur - (p * prev if good else 0)
            val *= cur
        a[n] = val
    return a
