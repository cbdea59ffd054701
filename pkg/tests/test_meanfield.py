import numpy as np
import pytest

from mimcool.meanfield import MeanFieldSeries, integrate_meanfield, meanfield_quadratures
from mimcool.params import SystemParams, swap12
from mimcool.propagator import DriveEnvelope, integrate_means


def test_undriven_stays_zero():
    s = integrate_meanfield(SystemParams(J=0.5), 2.0, 0.1)
    for a in (s.alpha1, s.beta, s.alpha2):
        assert np.array_equal(a, np.zeros_like(a))


def test_uncoupled_closed_form():
    p = SystemParams(gm=0.0, kappa2=3.0, E1=2e3, E2=5e2, delta1=40.0, delta2=-25.0)
    s = integrate_meanfield(p, 3.0, 0.01, tol=1e-11)
    for amp, E, k, d in ((s.alpha1, p.E1, p.kappa1, p.delta1), (s.alpha2, p.E2, p.kappa2, p.delta2)):
        exact = E * (np.exp(1j * d * s.t) - np.exp(-k * s.t)) / (k + 1j * d)
        assert np.allclose(amp, exact, rtol=1e-8, atol=1e-8 * np.abs(exact).max())
    assert np.array_equal(s.beta, np.zeros_like(s.beta))


def test_quadratures():
    t = np.array([0.0, 1.0])
    zero = MeanFieldSeries(t, np.zeros(2, complex), np.zeros(2, complex), np.zeros(2, complex))
    assert all(np.array_equal(x, np.zeros(2)) for x in meanfield_quadratures(zero))
    three = MeanFieldSeries(t, np.full(2, 3 + 0j), np.full(2, 3 + 1j), np.full(2, 3 - 2j))
    for x in meanfield_quadratures(three):
        assert np.allclose(x, 3 * np.sqrt(2))


def test_linear_regime_agrees():
    # weak drive: g |beta| << kappa, so the dropped terms are negligible
    p = SystemParams(kappa2=2.0, gm=1e-3, omega_m=30.0, delta1=30.0, delta2=33.0,
                     E1=50.0, E2=40.0, J=0.5)
    mf = integrate_meanfield(p, 10.0, 0.01, tol=1e-10)
    lin = integrate_means(p, 10.0, 0.01, tol=1e-10)
    env = DriveEnvelope(p)
    for amp, mu in ((mf.alpha1, lin.mu[:, 0] + env(1, lin.t)),
                    (mf.alpha2, lin.mu[:, 4] + env(2, lin.t))):
        rms = np.sqrt(np.mean(np.abs(amp - mu) ** 2) / np.mean(np.abs(amp) ** 2))
        assert rms <= 1e-3


def test_swap_symmetry():
    p = SystemParams(kappa2=2.0, gm=1e-4, omega_m=30.0, delta1=28.0, delta2=33.0,
                     E1=2e4, E2=1e4, J=0.6)
    a = integrate_meanfield(p, 4.0, 0.05, tol=1e-11)
    b = integrate_meanfield(swap12(p), 4.0, 0.05, tol=1e-11)
    assert np.allclose(b.beta, -a.beta, rtol=1e-7, atol=1e-9 * np.abs(a.beta).max())
    assert np.allclose(np.abs(b.alpha1), np.abs(a.alpha2), rtol=1e-7)
    assert np.allclose(np.abs(b.alpha2), np.abs(a.alpha1), rtol=1e-7)


def test_detuned_pair_keeps_oscillating():
    p = SystemParams(kappa2=5, omega_m=50, delta1=45, delta2=55, E1=4.5e6, E2=5.5e6, J=1)
    s = integrate_meanfield(p, 20.0, 0.01)
    Xc1, Xc2, _ = meanfield_quadratures(s)
    tail = s.t > 15
    for x in (Xc1, Xc2):
        assert np.ptp(x[tail]) > 0.5 * np.ptp(x)
