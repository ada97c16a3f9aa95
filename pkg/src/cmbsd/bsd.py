"""BSD verdicts over Q and over K, congruent-number sweeps, and Gross's formula."""

from __future__ import annotations

import csv
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import sympy

from .cm import detect_cm, hecke_character
from .curve import (
    CurveModel,
    LocalData,
    TorsionInfo,
    local_data,
    minimal_model,
    torsion,
    torsion_K,
)
from .lfun import GUARD_BITS, LValue, curve_l_value, equivariant_l_value, terms_for_eps
from .periods import PeriodData, equivariant_period, neron_real_period, recognize_in_K
from .qfield import ClassGroup, FracIdeal, QElem, characters, class_group

PASS = "PASS"
FAIL = "FAIL"
NON_VERDICT = "NON-VERDICT"
UNRECOGNIZED = "UNRECOGNIZED"
UNSUPPORTED = "UNSUPPORTED"

SHA_TOL = 1e-6


@dataclass
class BSDReport:
    curve: CurveModel
    verdict: str
    note: str = ""
    conductor: object = None
    lvalue: LValue | None = None
    period: object = None  # real Omega(E) over Q, PeriodData over K
    torsion: TorsionInfo | None = None
    locals: list[LocalData] = field(default_factory=list)
    sha_pred: object = None
    sha_rounded: int | None = None
    residual: object = None
    is_square: bool = False
    equivariant: dict | None = None

    @property
    def root_number(self):
        return self.lvalue.root_number if self.lvalue is not None else None

    def to_json(self) -> dict:
        E = self.curve
        out = {
            "curve": E.to_string() if E.has_rational_coefficients() else repr(E),
            "N": _ideal_or_int(self.conductor),
            "L1": self.lvalue.to_json() if self.lvalue is not None else None,
            "omega": _period_json(self.period),
            "torsion": self.torsion.order if self.torsion is not None else None,
            "tamagawa": [d.to_json() for d in self.locals],
            "sha_pred": mpmath.nstr(self.sha_pred, 30) if self.sha_pred is not None else None,
            "sha": self.sha_rounded,
            "square": self.is_square,
            "verdict": self.verdict,
        }
        if self.note:
            out["note"] = self.note
        if self.equivariant is not None:
            eq = self.equivariant
            out["equivariant"] = {
                "lhs_elem": str(eq["lhs_elem"]) if eq.get("lhs_elem") is not None else None,
                "ideal_identity_holds": eq.get("ideal_identity_holds"),
                "sha_ideal": eq["sha_ideal"].to_json() if eq.get("sha_ideal") is not None else None,
                "generator": str(eq["generator"]) if eq.get("generator") is not None else None,
                "generator_is_square": eq.get("generator_is_square"),
                "residual": mpmath.nstr(eq["residual"], 5) if eq.get("residual") is not None else None,
            }
        return out


def _ideal_or_int(N):
    if N is None:
        return None
    if isinstance(N, FracIdeal):
        return N.to_json()
    return int(N)


def _period_json(p):
    if p is None:
        return None
    if isinstance(p, PeriodData):
        return p.to_json()
    return mpmath.nstr(p, 40)


def _is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def _round_sha(sha_pred, tol: float):
    r = int(mpmath.nint(sha_pred))
    res = abs(sha_pred - r)
    return (r if res < tol else None), res


# -------------------------------------------------------------------------
# over Q


def verify_bsd_Q(E: CurveModel, prec: int = 128, tol: float = SHA_TOL, tail_eps: float | None = None) -> BSDReport:
    """Analytic order of Sha for a rank-zero CM curve over Q.

    The L-series is truncated for a 2^-prec tail unless ``tail_eps`` is given.
    """
    if E.base is not None:
        raise ValueError("verify_bsd_Q needs a curve over Q")
    cmd = detect_cm(E)
    if cmd is None:
        return BSDReport(E, UNSUPPORTED, note="curve has no CM")
    if not cmd.maximal:
        return BSDReport(E, UNSUPPORTED, note=f"CM by a non-maximal order (disc {cmd.disc})")
    with mpmath.workprec(prec + GUARD_BITS):
        Em = minimal_model(E)
        chi = hecke_character(Em)
        X = terms_for_eps(chi.curve_conductor, tail_eps) if tail_eps else None
        L = curve_l_value(chi, prec, X)
        rep = BSDReport(Em, NON_VERDICT, conductor=chi.curve_conductor, lvalue=L)
        if L.root_number is None:
            rep.verdict = UNRECOGNIZED
            rep.note = "root number undetermined"
            return rep
        if L.root_number == -1:
            rep.note = "root number -1: L(E,1) = 0, rank > 0 expected"
            return rep
        if L.is_zero():
            rep.note = "L(E,1) vanishes numerically"
            return rep
        rep.period = neron_real_period(Em)
        rep.torsion = torsion(Em)
        rep.locals = local_data(Em)
        cprod = math.prod(d.tamagawa for d in rep.locals)
        rep.sha_pred = mpmath.re(L.value) * rep.torsion.order**2 / (rep.period * cprod)
        rep.sha_rounded, rep.residual = _round_sha(rep.sha_pred, tol)
    if rep.sha_rounded is None:
        rep.verdict = UNRECOGNIZED
        rep.note = "predicted Sha is not close to an integer"
        return rep
    rep.is_square = rep.sha_rounded > 0 and _is_square(rep.sha_rounded)
    rep.verdict = PASS if rep.is_square else FAIL
    return rep


# -------------------------------------------------------------------------
# over K


def verify_bsd_equivariant_K(E: CurveModel, prec: int = 128, denom_bound: int = 10**4,
                             conj: bool = False, unit: QElem | None = None,
                             tail_eps: float | None = None) -> BSDReport:
    """The ideal identity for a CM curve over its CM field K (class number one).

    With x = L(psi-bar, 1)/Omega recognised in K, forms
    s = (x) (|E(K)|) a(Omega)^-1 prod |Phi_v|_K^-1 and checks that s is an
    integral ideal generated by a rational integer.  ``conj`` swaps psi-bar for
    psi; ``unit`` rescales the homology generator.
    """
    K = E.base
    if K is None:
        raise ValueError("verify_bsd_equivariant_K needs a curve over K")
    if K.class_number() != 1:
        return BSDReport(E, UNSUPPORTED, note="class number of K is not one")
    cmd = detect_cm(E)
    if cmd is None or not E.has_rational_coefficients():
        return BSDReport(E, UNSUPPORTED, note="needs a base change of a CM curve over Q")
    if not cmd.maximal or cmd.field_disc != K.disc:
        return BSDReport(E, UNSUPPORTED, note="K is not the CM field (maximal order)")
    tol = mpmath.ldexp(1, -prec // 3)
    with mpmath.workprec(prec + GUARD_BITS):
        EK = minimal_model(E)
        chi = hecke_character(E.over_Q())
        X = terms_for_eps(chi.curve_conductor, tail_eps) if tail_eps else None
        L = equivariant_l_value(chi, prec, conj=not conj, X=X)
        rep = BSDReport(EK, NON_VERDICT, lvalue=L)
        rep.conductor = chi.conductor
        if L.is_zero():
            rep.note = "L(psi-bar, 1) vanishes numerically"
            return rep
        pd = equivariant_period(EK, unit=unit, denom_bound=denom_bound)
        rep.period = pd
        x_num = L.value / pd.omega_K
        x = recognize_in_K(x_num, K, denom_bound, tol)
        rep.torsion = torsion_K(EK)
        rep.locals = local_data(EK)
        # classical BSD over K as a cross-check: |L|^2 |T|^2 / (Omega(E) prod c)
        cprod = math.prod(d.tamagawa for d in rep.locals)
        rep.sha_pred = abs(L.value) ** 2 * rep.torsion.order**2 / (pd.omega_E * cprod)
        rep.sha_rounded, rep.residual = _round_sha(rep.sha_pred, SHA_TOL)
        if rep.sha_rounded is not None:
            rep.is_square = rep.sha_rounded > 0 and _is_square(rep.sha_rounded)
        if x is None:
            rep.verdict = UNRECOGNIZED
            rep.equivariant = {"lhs_elem": None, "residual": abs(x_num)}
            rep.note = f"L/Omega not recognised in K with denominator <= {denom_bound}"
            return rep
        residual = abs(x.to_mpc() - x_num)
    phis = [d.tamagawa_ideal for d in rep.locals]
    if any(I is None for I in phis):
        rep.verdict = UNSUPPORTED
        rep.note = "Tamagawa ideal outside (1), (2), P with P^2 = (2) or (3): norm-only data"
        rep.equivariant = {"lhs_elem": x, "residual": residual}
        return rep
    s = FracIdeal.generated_by(K, x) * FracIdeal.generated_by(K, rep.torsion.order) / pd.ideal
    for I in phis:
        s = s / I
    gen = s.rational_generator()
    integral = s.is_integral()
    holds = integral and gen is not None and gen.denominator == 1
    rep.equivariant = {
        "lhs_elem": x,
        "sha_ideal": s,
        "generator": gen,
        "ideal_identity_holds": holds,
        "generator_is_square": bool(gen is not None and gen.denominator == 1 and _is_square(gen.numerator)),
        "residual": residual,
    }
    rep.verdict = PASS if holds else FAIL
    return rep


# -------------------------------------------------------------------------
# congruent number curves


def congruent_curve(n: int) -> CurveModel:
    return CurveModel([0, 0, 0, -n * n, 0])


def congruent_candidates(n_min: int, n_max: int) -> list[int]:
    """Squarefree n in range with n = 1, 2, 3 mod 8."""
    return [n for n in range(max(1, n_min), n_max + 1)
            if n % 8 in (1, 2, 3) and all(e == 1 for e in sympy.factorint(n).values())]


@dataclass(frozen=True)
class SweepRow:
    n: int
    verdict: str
    sha: int | None
    w: int | None
    sha_pred: str
    runtime_ms: int


def _sweep_one(args) -> tuple[SweepRow, BSDReport]:
    n, prec, tail_eps = args
    t0 = time.perf_counter()
    rep = verify_bsd_Q(congruent_curve(n), prec, tail_eps=tail_eps)
    ms = int((time.perf_counter() - t0) * 1000)
    sp = mpmath.nstr(rep.sha_pred, 20) if rep.sha_pred is not None else ""
    return SweepRow(n, rep.verdict, rep.sha_rounded, rep.root_number, sp, ms), rep


def congruent_sweep(n_min: int, n_max: int, prec: int = 128, threads: int = 1, tail_eps: float | None = None) -> list[tuple[SweepRow, BSDReport]]:
    """verify_bsd_Q on y^2 = x^3 - n^2 x for the admissible n, in input order."""
    ns = congruent_candidates(n_min, n_max)
    jobs = [(n, prec, tail_eps) for n in ns]
    if threads <= 1 or len(jobs) <= 1:
        return [_sweep_one(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(_sweep_one, jobs))


def sweep_summary(rows) -> dict:
    out = {PASS: 0, FAIL: 0, NON_VERDICT: 0, UNRECOGNIZED: 0, UNSUPPORTED: 0}
    for r in rows:
        out[r.verdict] += 1
    return out


# -------------------------------------------------------------------------
# Gross's formula


@dataclass(frozen=True)
class GrossInput:
    p: int
    class_group: ClassGroup
    t_values: tuple  # t(C) indexed like class_group.forms

    def __post_init__(self):
        if len(self.t_values) != self.class_group.order:
            raise ValueError(f"need {self.class_group.order} t-values, got {len(self.t_values)}")
        if any(t == 0 for t in self.t_values):
            raise ValueError("t(C) = 0 is not allowed")


@dataclass(frozen=True)
class GrossResult:
    value: object  # mpf
    rounded: int | None
    degenerate: bool


def gross_input(p: int, t_values) -> GrossInput:
    if p % 8 != 7 or not sympy.isprime(p):
        raise ValueError(f"{p} is not a prime congruent to 7 mod 8")
    G = class_group(-p)
    return GrossInput(p, G, tuple(mpmath.mpf(t) for t in t_values))


def gross_product(inp: GrossInput):
    """prod over characters phi of sum_C phi(C) t(C)."""
    G = inp.class_group
    out = mpmath.mpc(1)
    for phi in characters(G):
        out *= mpmath.fsum(phi.mp_value(i) * inp.t_values[i] for i in range(G.order))
    return out


def gross_determinant(inp: GrossInput):
    """The same product as the group determinant det(t(C_i C_j^-1)) (oracle)."""
    G = inp.class_group
    h = G.order
    M = mpmath.matrix(h, h)
    for i in range(h):
        for j in range(h):
            M[i, j] = inp.t_values[G.mul(i, G.inverse(j))]
    return mpmath.det(M)


def gross_sha(inp: GrossInput, tol=None, use_determinant: bool = False) -> GrossResult:
    """(2^(1-h) prod_phi sum_C phi(C) t(C) / prod_C t(C))^2."""
    h = inp.class_group.order
    if tol is None:
        tol = mpmath.ldexp(1, -mpmath.mp.prec // 2)
    P = gross_determinant(inp) if use_determinant else gross_product(inp)
    val = (P * mpmath.mpf(2) ** (1 - h) / mpmath.fprod(inp.t_values)) ** 2
    if abs(mpmath.im(val)) > tol * max(1, abs(val)):
        raise ArithmeticError(f"Gross value is not real: {val}")
    val = mpmath.re(val)
    r = int(mpmath.nint(val))
    rounded = r if abs(val - r) < tol * max(1, abs(val)) else None
    return GrossResult(val, rounded, degenerate=abs(val) < tol)


def read_t_values(path) -> list:
    """CSV lines 'class_index,t_value_decimal', returned in index order."""
    rows = {}
    with open(path, newline="") as fh:
        for rec in csv.reader(fh):
            if not rec or rec[0].strip().startswith("#"):
                continue
            if len(rec) != 2:
                raise ValueError(f"bad t-value row {rec!r}")
            idx = int(rec[0])
            if idx in rows:
                raise ValueError(f"duplicate class index {idx}")
            rows[idx] = mpmath.mpf(rec[1].strip())
    if sorted(rows) != list(range(len(rows))):
        raise ValueError("class indices must be 0..h-1")
    return [rows[i] for i in range(len(rows))]


@dataclass(frozen=True)
class GrossModel:
    p: int
    j: object
    m: object
    n: object
    exact: bool
    curve: CurveModel | None  # exact model when h = 1
    a4: object
    a6: object


def gross_curve_model(p: int, prec: int = 128) -> GrossModel:
    """y^2 = x^3 + (m p/48) x - n p^2/864 with m^3 = j, -n^2 p = j - 1728, sgn n = (2/p)."""
    if p % 8 != 7 or not sympy.isprime(p):
        raise ValueError(f"{p} is not a prime congruent to 7 mod 8")
    h = class_group(-p).order
    with mpmath.workprec(prec + GUARD_BITS):
        tau = (1 + mpmath.sqrt(-p)) / 2
        j = mpmath.re(1728 * mpmath.kleinj(tau))
        m = mpmath.cbrt(j) if j >= 0 else -mpmath.cbrt(-j)
        sign = sympy.jacobi_symbol(2, p)
        n = sign * mpmath.sqrt((1728 - j) / p)
        a4 = m * p / 48
        a6 = -n * p * p / 864
        if h != 1:
            return GrossModel(p, j, m, n, False, None, a4, a6)
        jr, mr, nr = (int(mpmath.nint(v)) for v in (j, m, n))
        tol = mpmath.ldexp(1, -prec // 2)
        if abs(j - jr) > tol * abs(j) or abs(m - mr) > tol * abs(m) or abs(n - nr) > tol * abs(n):
            raise ArithmeticError("j, m, n are not integers for a class-number-one p")
    if mr**3 != jr or -nr * nr * p != jr - 1728:
        raise ArithmeticError("exact relations m^3 = j, -n^2 p = j - 1728 fail")
    A4 = Fraction(mr * p, 48)
    A6 = Fraction(-nr * p * p, 864)
    return GrossModel(p, jr, mr, nr, True, CurveModel([0, 0, 0, A4, A6]), A4, A6)
