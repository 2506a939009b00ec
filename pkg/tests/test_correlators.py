import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from vacharvest.correlators import (FOUR_PI2, Geometry, WightmanKernel, frequency_kernel_static, rindler_trajectory,
                                    wightman_rindler_cross, wightman_rindler_same, wightman_static)


def test_static_spacelike_value():
    assert wightman_static(0.0, 1.0, 0.0) == pytest.approx(1 / FOUR_PI2)
    assert 1 / FOUR_PI2 == pytest.approx(0.0253303, abs=1e-7)


def test_static_coincidence_under_regulator():
    v = wightman_static(0.0, 0.0, 1e-3)
    assert v.imag == 0.0
    assert v.real == pytest.approx(1 / (FOUR_PI2 * 1e-6))


def test_static_timelike_imaginary_sign():
    # for t > r the imaginary part of D+ is negative, the sign that -i pi delta' structure gives
    v = wightman_static(2.0, 1.0, 1e-6)
    assert v.imag < 0
    # the commutator D(t) - D(-t) = 2i Im D is supported inside the light cone only
    assert abs(wightman_static(0.5, 1.0, 1e-9).imag) < 1e-9


@given(dt=st.floats(-5, 5), r=st.floats(0, 5), eps=st.floats(1e-4, 1e-1))
@settings(max_examples=200, deadline=None)
def test_static_parity_and_hermiticity(dt, r, eps):
    a = wightman_static(dt, r, eps)
    b = wightman_static(-dt, r, eps)
    assert a.real == pytest.approx(b.real, rel=1e-12, abs=1e-12)
    assert a.imag == pytest.approx(-b.imag, rel=1e-12, abs=1e-12)


def test_static_rejects_negative_distance():
    with pytest.raises(ValueError):
        wightman_static(0.0, -1.0)


def test_rindler_values():
    assert wightman_rindler_same(1.0, 1.0).real == pytest.approx(-1 / (FOUR_PI2 * np.sinh(1.0) ** 2))
    assert wightman_rindler_same(1.0, 1.0).real == pytest.approx(-0.01834070, abs=1e-8)
    assert wightman_rindler_cross(0.0, 1.0).real == pytest.approx(1 / FOUR_PI2)
    assert wightman_rindler_cross(2.0, 1.0).real == pytest.approx(0.00178961, abs=1e-8)
    assert wightman_rindler_same(0.0, 1.0, 1e-3).real == pytest.approx(1 / (FOUR_PI2 * 1e-6), rel=1e-6)
    assert abs(wightman_rindler_same(40.0, 1.0)) < 1e-30
    assert abs(wightman_rindler_cross(40.0, 1.0)) < 1e-30


def test_rindler_same_pole_periodicity():
    # 1/sinh^2 has double poles at i pi n L; near each the Laurent leading term is -1/(4 pi^2 (z - i pi n L)^2)
    L = 1.3
    for n in (1, 2, 3):
        d = 1e-4
        z = 1j * np.pi * n * L + d
        v = wightman_rindler_same(z, L)
        assert v * d * d == pytest.approx(-1 / FOUR_PI2, rel=1e-6)


def _embedded_interval(ta, tb, L):
    t1, x1 = rindler_trajectory(ta, L, "A")
    t2, x2 = rindler_trajectory(tb, L, "B")
    return t1 - t2, abs(x1 - x2)


def test_embedding_consistency_random_pairs():
    rng = np.random.default_rng(7)
    for _ in range(100):
        L = rng.uniform(0.3, 3.0)
        ta, tb = rng.uniform(-2 * L, 2 * L, size=2)
        # same worldline: interval from two points on B
        t1, x1 = rindler_trajectory(ta, L, "B")
        t2, x2 = rindler_trajectory(tb, L, "B")
        same = wightman_static(t1 - t2, abs(x1 - x2))
        assert wightman_rindler_same(ta - tb, L) == pytest.approx(same, rel=1e-8)
        dt, r = _embedded_interval(ta, tb, L)
        assert wightman_rindler_cross(ta + tb, L) == pytest.approx(wightman_static(dt, r), rel=1e-8)


def test_trajectory_acceleration():
    L = 2.0
    tau = np.linspace(-1, 1, 5)
    t, x = rindler_trajectory(tau, L, "B")
    assert np.allclose(x**2 - t**2, (L / 2) ** 2)  # proper acceleration 2/L
    with pytest.raises(ValueError):
        rindler_trajectory(0.0, L, "C")


def test_frequency_kernel_limits():
    assert frequency_kernel_static(0.0, 1.0) == 0.0
    assert frequency_kernel_static(1e-8, 2.0) == pytest.approx(1e-8)
    assert frequency_kernel_static(3.0, 1e-9) == pytest.approx(frequency_kernel_static(3.0, 0.0), rel=1e-12)
    assert frequency_kernel_static(3.0, 0.0) == 3.0


@pytest.mark.parametrize("dt, r", [(0.0, 1.0), (0.3, 1.0), (-0.7, 2.0)])
def test_inverse_transform_reproduces_static_correlator(dt, r):
    # D(dt, r) = (1/4pi^2) int_0^inf K_r(w) exp(-i w (dt - i eps)) dw, eps -> 0 through an exponential damping
    eps = 1e-3
    f_re = lambda w: frequency_kernel_static(w, r) * np.cos(w * dt) * np.exp(-w * eps)
    f_im = lambda w: -frequency_kernel_static(w, r) * np.sin(w * dt) * np.exp(-w * eps)
    upper = 40 / eps
    re = quad(f_re, 0, upper, limit=20000, epsabs=1e-10)[0]
    im = quad(f_im, 0, upper, limit=20000, epsabs=1e-10)[0]
    got = (re + 1j * im) / FOUR_PI2
    assert got == pytest.approx(wightman_static(dt, r, eps), rel=1e-6)


def test_kernel_object():
    k = WightmanKernel(Geometry.STATIC, 1.0, 1e-3)
    assert k.cross(0.0) == wightman_static(0.0, 1.0, 1e-3)
    r = WightmanKernel(Geometry.RINDLER, 1.0)
    assert r.same(1.0) == wightman_rindler_same(1.0, 1.0)
    assert r.cross(2.0) == wightman_rindler_cross(2.0, 1.0)
    with pytest.raises(ValueError):
        WightmanKernel(Geometry.STATIC, 0.0)
