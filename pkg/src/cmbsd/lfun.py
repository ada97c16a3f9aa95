"""Central L-values with rigorous truncation bounds.

For a Dirichlet series L(s) = sum c_n n^-s of weight two and conductor N with
Lambda(s) = A^s Gamma(s) L(s) = W Lambda*(2 - s), A = sqrt(N)/(2 pi), the value
at s = 1 is

    L(1) = sum c_n/n exp(-n/A) + W sum conj(c_n)/n exp(-n/A).

The tail beyond X terms is bounded with |c_n| <= d(n) sqrt(n) <= 2n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np
from scipy.special import gamma as gamma_fn
from scipy.special import gammaincc

from .cm import HeckeChar, dirichlet_coeffs, psi_at_prime
from .qfield import INERT, SPLIT, split_type

GUARD_BITS = 32


@dataclass(frozen=True)
class LValue:
    value: object  # mpc
    abs_err: object  # mpf
    terms_used: int
    root_number: object  # +1, -1, a complex unit, or None when undetermined

    @property
    def real(self):
        return mpmath.re(self.value)

    def is_zero(self, factor: float = 3.0) -> bool:
        return abs(self.value) <= factor * self.abs_err

    def to_json(self) -> dict:
        w = self.root_number
        if isinstance(w, complex):
            w = {"re": w.real, "im": w.imag}
        return {
            "re": mpmath.nstr(mpmath.re(self.value), 40),
            "im": mpmath.nstr(mpmath.im(self.value), 40),
            "err": mpmath.nstr(self.abs_err, 5),
            "w": w,
        }


def terms_needed(N: int, prec: int) -> int:
    """X with 4 exp(-(X+1) c)/(1 - exp(-c)) < 2^-(prec+8), c = 2 pi/sqrt N."""
    c = 2 * math.pi / math.sqrt(N)
    target = (prec + 8) * math.log(2) + math.log(4) - math.log(-math.expm1(-c))
    return max(16, int(math.ceil(target / c)))


def terms_for_eps(N: int, eps: float) -> int:
    """Smallest X with tail_bound(N, X) < eps."""
    c = 2 * math.pi / math.sqrt(N)
    target = math.log(4 / eps) - math.log(-math.expm1(-c))
    X = max(16, int(math.ceil(target / c)) - 1)
    while X > 16 and tail_bound(N, X - 1) < eps:
        X -= 1
    while tail_bound(N, X) >= eps:
        X += 1
    return X


def tail_bound(N: int, X: int):
    c = 2 * mpmath.pi / mpmath.sqrt(N)
    # sum_{n > X} 2 exp(-c n), doubled for the W-term
    return 4 * mpmath.exp(-c * (X + 1)) / (-mpmath.expm1(-c))


def check_ramanujan(coeffs, samples: int = 64) -> bool:
    """|a_n| <= d(n) sqrt(n) on a deterministic sample of n."""
    import sympy

    X = len(coeffs) - 1
    if X < 1:
        return True
    ns = sorted(set(np.linspace(1, X, min(samples, X)).astype(int)))
    for n in ns:
        if coeffs[n] * coeffs[n] > sympy.divisor_count(n) ** 2 * n:
            return False
    return True


# -------------------------------------------------------------------------
# root number


def _split_sums(c: np.ndarray, A: float, s: float, u: float):
    """F_s(u) and G_s(u) of the t-split functional equation (double precision)."""
    n = np.arange(1, len(c), dtype=float)
    cn = c[1:]
    F = np.sum(cn * (A / n) ** s * gammaincc(s, n * u / A)) * gamma_fn(s)
    G = np.sum(np.conj(cn) * (A / n) ** (2 - s) * gammaincc(2 - s, n / (u * A))) * gamma_fn(2 - s)
    return F, G


def root_number_from(c: np.ndarray, N: int, real: bool = True, tol: float = 1e-6):
    """W from two splitting points, confirmed at s = 1.3 and s = 0.7.

    Returns +1/-1 (real coefficients), a complex unit, or None.
    """
    A = math.sqrt(N) / (2 * math.pi)
    need = int(A * 60 / 0.8) + 10
    if len(c) - 1 < need:
        raise ValueError(f"root number test needs {need} coefficients, got {len(c) - 1}")
    c = np.asarray(c[: need + 1], dtype=complex)
    ws = []
    for s in (1.3, 0.7):
        F1, G1 = _split_sums(c, A, s, 1.0)
        F2, G2 = _split_sums(c, A, s, 1.25)
        den = G2 - G1
        scale = max(abs(F1), abs(G1), 1e-300)
        if abs(den) < 1e-9 * scale:
            return None
        ws.append((F1 - F2) / den)
    w1, w2 = ws
    if abs(w1 - w2) > tol or abs(abs(w1) - 1) > tol:
        return None
    if real:
        if abs(w1 - 1) < tol:
            return 1
        if abs(w1 + 1) < tol:
            return -1
        return None
    return complex(w1)


def root_number(coeffs, N: int, prec: int = 53):
    """Root number of a real weight-two series; None when undetermined."""
    return root_number_from(np.asarray(coeffs, dtype=float), N, real=True)


# -------------------------------------------------------------------------
# value at s = 1


def _smoothed_sum(coeffs, N: int, X: int, wp: int):
    with mpmath.workprec(wp):
        q = mpmath.exp(-2 * mpmath.pi / mpmath.sqrt(N))
        acc = mpmath.mpc(0)
        absacc = mpmath.mpf(0)
        qn = mpmath.mpf(1)
        for n in range(1, X + 1):
            qn *= q
            a = coeffs[n]
            if a:
                term = mpmath.mpmathify(a) * qn / n
                acc += term
                absacc += abs(term)
        return acc, absacc


def l_value_rank0(coeffs, N: int, prec: int = 128, w=None, X: int | None = None) -> LValue:
    """L(1) from coefficients coeffs[n] = a_n (coeffs[0] ignored).

    ``w`` is computed by the functional-equation test when not supplied; an
    undetermined sign is reported as None with the bound doubled.
    """
    if X is None:
        X = terms_needed(N, prec)
    if len(coeffs) - 1 < X:
        raise ValueError(f"need {X} coefficients, got {len(coeffs) - 1}")
    if not check_ramanujan(coeffs):
        raise ValueError("coefficients violate |a_n| <= d(n) sqrt(n)")
    if w is None:
        w = root_number(coeffs, N) if len(coeffs) - 1 >= _rn_terms(N) else None
    wp = prec + GUARD_BITS
    S, absS = _smoothed_sum(coeffs, N, X, wp)
    with mpmath.workprec(wp):
        tail = tail_bound(N, X)
        rnd = (X + 8) * absS * mpmath.ldexp(1, -wp + 2)
        if w is None:
            # either sign is possible: report the +1 value with a doubled bound
            return LValue(2 * S, 2 * (tail + rnd) + 2 * abs(S), X, None)
        value = (1 + w) * S
        err = tail + (2 if w == 1 else 0) * rnd
        return LValue(mpmath.mpc(value), err, X, w)


def _rn_terms(N: int) -> int:
    return int(math.sqrt(N) / (2 * math.pi) * 60 / 0.8) + 10


def curve_l_value(chi: HeckeChar, prec: int = 128, X: int | None = None) -> LValue:
    """L(E/Q, 1) for the CM curve behind ``chi``."""
    N = chi.curve_conductor
    if X is None:
        X = terms_needed(N, prec)
    need = max(X, _rn_terms(N))
    a = dirichlet_coeffs(chi, need)
    w = root_number(a, N)
    return l_value_rank0(a, N, prec, w=w, X=X)


# -------------------------------------------------------------------------
# the Hecke L-value over K


def ideal_coefficients(chi: HeckeChar, X: int, conj: bool = True) -> tuple[np.ndarray, np.ndarray]:
    """c_n = sum over ideals of norm n of psi-bar (or psi), as exact coordinates.

    Returns int64 arrays (u, v) with c_n = u_n + v_n w.  Ideals are enumerated
    as products of prime ideals, so no factoring occurs.
    """
    import sympy

    K = chi.field
    D, wn = K.disc, K.omega_norm
    primes = []  # (norm, value) for prime ideals of good reduction
    for p in sympy.primerange(2, X + 1):
        p = int(p)
        if p in chi.bad_primes:
            continue
        st = split_type(p, K)
        if st == SPLIT:
            v = psi_at_prime(chi, p)
            primes += [(p, v), (p, v.conj())]
        elif st == INERT:
            if p * p <= X:
                primes.append((p * p, K.elem(-p)))
        else:
            raise ValueError(f"ramified prime {p} of good reduction is not supported")
    u = np.zeros(X + 1, dtype=np.int64)
    v = np.zeros(X + 1, dtype=np.int64)
    u[1] = 1
    for q, val in primes:
        if conj:
            val = val.conj()
        m_max = X // q
        idx = np.arange(1, m_max + 1)
        bu, bv = u[1 : m_max + 1].copy(), v[1 : m_max + 1].copy()
        au = np.zeros_like(u)
        av = np.zeros_like(v)
        qk, pw = q, val
        while qk <= X:
            lim = X // qk
            x, y = int(pw.a), int(pw.b)
            tgt = idx[:lim] * qk
            # (bu + bv w)(x + y w) with w^2 = D w - wn
            au[tgt] += bu[:lim] * x - bv[:lim] * y * wn
            av[tgt] += bu[:lim] * y + bv[:lim] * x + bv[:lim] * y * D
            qk *= q
            pw = pw * val
        u += au
        v += av
    return u, v


def _to_complex(u: np.ndarray, v: np.ndarray, D: int) -> np.ndarray:
    return u + v * (D / 2 + 1j * math.sqrt(-D) / 2)


def equivariant_l_value(chi: HeckeChar, prec: int = 128, conj: bool = True, X: int | None = None,
                        W=None) -> LValue:
    """L(psi-bar, 1) (or L(psi, 1) with conj=False) as a sum over ideals of K.

    The smoothing is exp(-2 pi N(a)/sqrt(N)) with N = |D| N(f); W is found by
    the functional-equation test on the ideal coefficients unless supplied.
    """
    N = chi.curve_conductor
    D = chi.field.disc
    if X is None:
        X = terms_needed(N, prec)
    need = max(X, _rn_terms(N))
    u, v = ideal_coefficients(chi, need, conj=conj)
    if W is None:
        W = root_number_from(_to_complex(u, v, D), N, real=False)
        if W is None:
            raise ArithmeticError("functional equation test failed for the Hecke L-function")
        if abs(W.imag) < 1e-6 and abs(abs(W.real) - 1) < 1e-6:
            W = int(round(W.real))
    wp = prec + GUARD_BITS
    with mpmath.workprec(wp):
        q = mpmath.exp(-2 * mpmath.pi / mpmath.sqrt(N))
        om = mpmath.mpc(mpmath.mpf(D) / 2, mpmath.sqrt(-D) / 2)
        S1 = mpmath.mpc(0)
        S2 = mpmath.mpc(0)
        absS = mpmath.mpf(0)
        qn = mpmath.mpf(1)
        for n in range(1, X + 1):
            qn *= q
            if u[n] or v[n]:
                cn = int(u[n]) + int(v[n]) * om
                t = cn * qn / n
                S1 += t
                S2 += mpmath.conj(t)
                absS += abs(t)
        value = S1 + mpmath.mpmathify(W) * S2
        err = tail_bound(N, X) + 2 * (X + 8) * absS * mpmath.ldexp(1, -wp + 2)
    return LValue(value, err, X, W)


def twist_l_check(chi: HeckeChar, chi_twist: HeckeChar, prec: int = 128):
    """(|L(psi-bar,1)|^2, L(E,1) L(E_D,1), combined error)."""
    Lk = equivariant_l_value(chi, prec)
    L1 = curve_l_value(chi, prec)
    L2 = curve_l_value(chi_twist, prec)
    lhs = abs(Lk.value) ** 2
    rhs = mpmath.re(L1.value) * mpmath.re(L2.value)
    err = (2 * abs(Lk.value) * Lk.abs_err + Lk.abs_err**2
           + abs(L1.value) * L2.abs_err + abs(L2.value) * L1.abs_err + L1.abs_err * L2.abs_err)
    return lhs, rhs, err
