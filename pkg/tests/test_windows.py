import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from vacharvest.errors import WindowDomainError
from vacharvest.windows import (WindowFunction, WindowShape, WindowSpectrum, cosine_squared, gaussian,
                                load_tabulated, tabulated, window_energy, window_eval, window_spectrum)


def numeric_spectrum(w, om):
    lo, hi = w.support
    # kinks of a tabulated interpolant go in as breakpoints
    pts = None if w.table is None else list(w.table[0][1:-1] + w.center)
    kw = dict(points=pts, epsabs=1e-14, epsrel=1e-13, limit=400)
    re = quad(lambda t: window_eval(w, t) * np.cos(om * t), lo, hi, **kw)[0]
    im = quad(lambda t: window_eval(w, t) * np.sin(om * t), lo, hi, **kw)[0]
    return re + 1j * im


@pytest.mark.parametrize("t, expected", [(0.0, 1.0), (0.5, 0.0), (0.25, 0.5), (-0.25, 0.5)])
def test_cos2_values(t, expected):
    assert window_eval(cosine_squared(), t) == pytest.approx(expected, abs=1e-15)


def test_cos2_spectrum_at_zero_is_area():
    assert window_spectrum(cosine_squared(), 0.0) == pytest.approx(0.5, abs=1e-15)


def test_cos2_spectrum_matches_quadrature_at_3_7():
    w = cosine_squared()
    assert abs(window_spectrum(w, 3.7) - numeric_spectrum(w, 3.7)) < 1e-12


def test_cos2_closed_form_on_grid_including_removable_points():
    w = cosine_squared(duration=1.0)
    a = 2 * np.pi
    grid = np.concatenate([np.linspace(-50, 50, 100), [0.0, a, -a, a + 1e-9, a - 1e-7]])
    closed = window_spectrum(w, grid)
    assert np.all(np.isfinite(closed))
    numeric = np.array([numeric_spectrum(w, om) for om in grid])
    assert np.max(np.abs(closed - numeric)) < 1e-10


@pytest.mark.parametrize("maker", [cosine_squared, gaussian])
def test_even_window_spectrum_symmetric(maker):
    w = maker(duration=1.3)
    assert window_spectrum(w, 5.0) == pytest.approx(window_spectrum(w, -5.0), abs=1e-15)
    assert abs(window_spectrum(w, 5.0).imag) < 1e-15


_GRID = np.linspace(-0.5, 0.5, 41)


@pytest.mark.parametrize("w", [cosine_squared(0.7, center=0.3, amplitude=0.2), gaussian(1.5, center=-0.4),
                               tabulated(_GRID, np.sin(np.pi * (_GRID + 0.5)) ** 3, center=0.1)],
                         ids=["cos2-shifted", "gaussian", "tabulated"])
def test_spectrum_matches_numeric_transform(w):
    for om in (-17.0, -3.2, 0.0, 1e-4, 2.5, 9.0, 33.0):
        ref = numeric_spectrum(w, om)
        assert abs(window_spectrum(w, om) - ref) <= 1e-10 * max(abs(ref), 1e-3)


@pytest.mark.parametrize("w", [cosine_squared(), gaussian(), cosine_squared(2.0, center=0.5)])
def test_parseval(w):
    energy = window_energy(w)
    f = lambda om: abs(window_spectrum(w, om)) ** 2
    # |S|^2 decays like w^-6 for cos^2 and faster for the gaussian; integrate far and add the tail bound
    total = 2 * sum(quad(f, k, k + 10, epsabs=1e-16, epsrel=1e-13, limit=200)[0] for k in range(0, 4000, 10))
    assert total / (2 * np.pi) == pytest.approx(energy, rel=1e-8)


def test_energy_of_cos2():
    assert window_energy(cosine_squared(2.0, amplitude=0.5)) == pytest.approx(0.25 * 3 * 2.0 / 8, rel=1e-14)


@given(t=st.floats(-10, 10), T=st.floats(0.1, 5), c=st.floats(-2, 2))
@settings(max_examples=200, deadline=None)
def test_zero_outside_support(t, T, c):
    w = cosine_squared(T, center=c)
    v = window_eval(w, t)
    if abs(t - c) > T / 2:
        assert v == 0.0
    else:
        assert 0.0 <= v <= 1.0


@given(s=st.floats(-0.5, 0.5))
@settings(max_examples=100, deadline=None)
def test_builtin_shapes_even(s):
    for w in (cosine_squared(), gaussian()):
        assert window_eval(w, s) == pytest.approx(window_eval(w, -s), abs=1e-15)
        assert window_eval(w, s) >= 0


@given(om=st.floats(-200, 200))
@settings(max_examples=100, deadline=None)
def test_real_window_spectrum_hermitian(om):
    w = cosine_squared(1.0, center=0.37)
    assert window_spectrum(w, -om) == pytest.approx(np.conj(window_spectrum(w, om)), abs=1e-14)


def test_spectrum_decays():
    w = cosine_squared()
    mags = np.abs(window_spectrum(w, np.array([10.0, 100.0, 1000.0]) + 0.3))
    assert mags[0] > mags[1] > mags[2] and mags[2] < 1e-7


def test_gaussian_edges_and_peak():
    w = gaussian(2.0)
    assert window_eval(w, 0.0) == pytest.approx(1.0)
    assert window_eval(w, 1.0) == pytest.approx(0.0, abs=1e-15)
    assert window_eval(w, 1.0001) == 0.0


def test_tabulated_domain_error(tmp_path):
    f = tmp_path / "w.txt"
    t = np.linspace(-0.5, 0.5, 11)
    np.savetxt(f, np.column_stack([t, 1 - 4 * t**2]))
    w = load_tabulated(f)
    assert w.duration == pytest.approx(1.0)
    assert window_eval(w, 0.0) == pytest.approx(1.0)
    with pytest.raises(WindowDomainError):
        window_eval(w, 0.6)


def test_tabulated_needs_uniform_grid():
    with pytest.raises(ValueError):
        tabulated([0.0, 0.1, 0.3], [0.0, 1.0, 0.0])


@pytest.mark.parametrize("kw", [{"duration": 0.0}, {"duration": -1.0}, {"amplitude": -0.1}])
def test_invalid_parameters(kw):
    with pytest.raises(ValueError):
        WindowFunction(WindowShape.COSINE_SQUARED, **kw)


def test_spectrum_object_carries_convention():
    s = WindowSpectrum(cosine_squared())
    assert "exp(+i w t)" in s.convention
    assert s.eval(0.0) == pytest.approx(0.5)
