from fractions import Fraction

import mpmath
import pytest

from cmbsd.curve import CurveModel, Iso, minimal_model
from cmbsd.periods import (
    NonMinimalModelError,
    PeriodData,
    UnsupportedPeriodError,
    agm,
    eisenstein_g2g3,
    equivariant_period,
    neron_real_period,
    period_lattice,
    period_norm_check,
    real_period_quadrature,
    recognize_in_K,
)
from cmbsd.qfield import FracIdeal, QuadField

SUITE = [
    [0, 0, 0, -1, 0],
    [1, -1, 0, -2, -1],
    [0, 0, 0, 0, -1],
    [0, 0, 0, 0, 1],
    [0, -1, 1, -10, -20],
    [0, 0, 1, -1, 0],
    [1, 1, 1, -10, -10],
]


def test_agm_gauss_constant():
    with mpmath.workprec(128):
        # 1 / agm(1, sqrt 2) is Gauss's constant
        g = 1 / agm(1, mpmath.sqrt(2))
        assert abs(g - mpmath.mpf("0.8346268416740731862814297327990468")) < mpmath.mpf(10) ** -30
        z = agm(mpmath.mpc(1, 2), mpmath.mpc(3, -1))
        assert abs(z - mpmath.agm(mpmath.mpc(1, 2), mpmath.mpc(3, -1))) < mpmath.mpf(10) ** -30


@pytest.mark.parametrize("ainvs", SUITE)
def test_agm_vs_quadrature(ainvs):
    with mpmath.workprec(128):
        E = CurveModel(ainvs)
        lat = period_lattice(E)
        assert abs(lat.w1 - real_period_quadrature(E)) < mpmath.mpf(10) ** -15


@pytest.mark.parametrize("ainvs", SUITE)
def test_lattice_reconstruction(ainvs):
    with mpmath.workprec(128):
        E = CurveModel(ainvs)
        lat = period_lattice(E)
        g2, g3 = eisenstein_g2g3(lat.w1, lat.w2)
        c4, c6 = E.c_invariants
        assert abs(12 * g2 - c4) < mpmath.mpf(10) ** -20 * max(1, abs(c4))
        assert abs(216 * g3 - c6) < mpmath.mpf(10) ** -20 * max(1, abs(c6))
        assert mpmath.im(lat.tau) > 0
        assert lat.real_locus_components == (2 if E.discriminant > 0 else 1)


def test_rectangular_and_hexagonal():
    with mpmath.workprec(128):
        lat = period_lattice(CurveModel([0, 0, 0, -1, 0]))
        assert abs(mpmath.im(lat.w1)) < 1e-30
        assert abs(mpmath.re(lat.w2)) < 1e-30  # rectangular
        lat3 = period_lattice(CurveModel([0, 0, 0, 0, -1]))
        tau = lat3.w2 / lat3.w1
        # tau is SL2(Z)-equivalent to a primitive sixth root of unity: j(tau) = 0
        assert abs(mpmath.kleinj(tau)) < 1e-25


def test_rescaled_lattice():
    with mpmath.workprec(128):
        E = CurveModel([0, 0, 0, -1, 0])
        u = Fraction(1, 2)
        F = E.transform(Iso(u, 0, 0, 0))
        l1, l2 = period_lattice(E), period_lattice(F)
        # the new Neron differential is u * (old one), so every period scales by u
        assert abs(l2.w1 - l1.w1 / 2) < 1e-25
        assert abs(l2.covolume - l1.covolume / 4) < 1e-25


def test_neron_real_period_examples():
    with mpmath.workprec(128):
        E = CurveModel([0, 0, 0, -1, 0])
        om = neron_real_period(E)
        # least real period of dx/2y is 2 int_1^oo dx / (2 sqrt(x^3 - x)); doubled for two components
        # with x = 1 + t^2 the integrand becomes 2 / sqrt((1 + t^2)(2 + t^2))
        least = mpmath.quad(lambda t: 2 / mpmath.sqrt((1 + t * t) * (2 + t * t)), [0, 1, mpmath.inf])
        assert abs(om - 2 * least) < mpmath.mpf(10) ** -25
        with pytest.raises(NonMinimalModelError):
            neron_real_period(CurveModel([0, 0, 0, -16, 0]))
        with pytest.raises(UnsupportedPeriodError):
            neron_real_period(CurveModel([0, 0, 0, -1, 0], base=QuadField(-4)))


@pytest.mark.parametrize("n", [2, 3, 5, 6, 7])
def test_twist_scaling(n):
    with mpmath.workprec(128):
        E1 = CurveModel([0, 0, 0, -1, 0])
        En = CurveModel([0, 0, 0, -n * n, 0])
        w1 = period_lattice(E1).w1
        wn = period_lattice(En).w1
        # least real period scales by 1/sqrt(n) on the (unminimalised) twist
        assert abs(wn * mpmath.sqrt(n) - w1) < mpmath.mpf(10) ** -25
        assert period_lattice(En).real_locus_components == 2


def test_recognize_in_K():
    K = QuadField(-4)
    with mpmath.workprec(128):
        x = K.gaussian(Fraction(3, 7), -2)
        z = x.to_mpc()
        assert recognize_in_K(z, K, 100) == x
        assert recognize_in_K(z, K, 5) is None
        assert recognize_in_K(mpmath.pi, K, 10**4) is None


@pytest.fixture(scope="module")
def pd_i():
    with mpmath.workprec(160):
        E = minimal_model(CurveModel([0, 0, 0, -1, 0], base=QuadField(-4)))
        return E, equivariant_period(E)


def test_equivariant_period_free(pd_i):
    E, pd = pd_i
    assert pd.ideal == FracIdeal.unit(E.base)
    assert pd.I_omega == 1
    with mpmath.workprec(160):
        lat = period_lattice(E)
        # lattice = O_K * Omega
        for w in (lat.w1, lat.w2):
            assert recognize_in_K(w / pd.omega_K, E.base, 10) is not None


def test_period_norm_identity(pd_i):
    E, pd = pd_i
    with mpmath.workprec(160):
        ok, res = period_norm_check(pd)
        assert ok and res < mpmath.mpf(10) ** -20
        # E has two real components, so Omega(E/K) = (least real period)^2 = Omega(E/Q)^2 / 4
        om_q = neron_real_period(CurveModel([0, 0, 0, -1, 0]))
        assert abs(pd.omega_E - om_q**2 / 4) < mpmath.mpf(10) ** -25


def test_unit_rescale(pd_i):
    E, pd = pd_i
    K = E.base
    with mpmath.workprec(160):
        i = K.gaussian(0, 1)
        pd2 = equivariant_period(E, unit=i)
        assert pd2.ideal == pd.ideal
        assert abs(abs(pd2.omega_K) - abs(pd.omega_K)) < 1e-30
        assert abs(pd2.omega_K - pd.omega_K * i.to_mpc()) < 1e-30


def test_synthetic_ideal_norm():
    K = QuadField(-4)
    with mpmath.workprec(128):
        a = FracIdeal.generated_by(K, K.gaussian(1, 1))
        pd = PeriodData(mpmath.mpf(2) * 3, mpmath.sqrt(3), a)
        ok, res = period_norm_check(pd)
        assert ok
        ok1, _ = period_norm_check(PeriodData(mpmath.mpf(3), mpmath.sqrt(3), FracIdeal.unit(K)))
        assert ok1


def test_equivariant_period_rejects():
    with pytest.raises(UnsupportedPeriodError):
        equivariant_period(CurveModel([0, 0, 0, -1, 0]))
    with pytest.raises(UnsupportedPeriodError):
        equivariant_period(CurveModel([0, 0, 0, -1, 0], base=QuadField(-23)))


def test_equivariant_period_q_sqrt_minus7():
    with mpmath.workprec(160):
        E = minimal_model(CurveModel([1, -1, 0, -2, -1], base=QuadField(-7)))
        pd = equivariant_period(E)
        ok, res = period_norm_check(pd)
        assert ok
