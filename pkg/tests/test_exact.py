import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from drude_rc.exact import (
    PlaneWave1D,
    dispersion_coeffs,
    dispersion_roots,
    plane_wave_eval,
    scattering_build,
    scattering_eval,
    spp_build,
    spp_eval,
)
from drude_rc.materials import VACUUM, MaterialParams, ScalingConvention, silver

AG = silver(ScalingConvention(1e15))


def test_dispersion_reference_digits():
    r = dispersion_roots(1.0, 3.0, 1.0, 10.0, 5.0)
    assert abs(r.right - (-0.3765531 + 5.185973j)) < 1e-6
    assert abs(r.left - (-0.3765531 - 5.185973j)) < 1e-6
    assert abs(r.decaying - (-9.2468938)) < 1e-6
    coeffs = dispersion_coeffs(1.0, 3.0, 1.0, 10.0, 5.0)
    for z in r:
        assert abs(np.polyval(coeffs, z)) < 1e-10


def test_dispersion_sympy_oracle():
    s = sympy.symbols("s")
    poly = s**3 + 10 * s**2 + (25 + 9) * s + 10 * 25
    oracle = sorted((complex(z) for z in sympy.Poly(poly, s).nroots(n=30)), key=lambda z: z.imag)
    r = dispersion_roots(1.0, 3.0, 1.0, 10.0, 5.0)
    assert [r.left, r.decaying, r.right] == pytest.approx(oracle, abs=1e-13)


@given(
    c=st.floats(0.2, 3),
    wp=st.floats(0, 20),
    eps=st.floats(0.5, 10),
    g=st.floats(0, 20),
    k=st.floats(0.1, 20),
)
def test_dispersion_root_properties(c, wp, eps, g, k):
    r = dispersion_roots(c, wp, eps, g, k)
    coeffs = dispersion_coeffs(c, wp, eps, g, k)
    scale = max(1.0, float(np.abs(coeffs).max()))
    for z in r:
        assert abs(np.polyval(coeffs, z)) <= 1e-9 * scale * max(1.0, abs(z)) ** 3
        assert z.real <= 1e-9 * scale
    assert r.left.imag <= r.decaying.imag <= r.right.imag
    assert sum(r) == pytest.approx(-g, abs=1e-9 * scale)


def test_dispersion_rejects_negative():
    with pytest.raises(ValueError):
        dispersion_roots(1.0, -1.0, 1.0, 1.0, 1.0)


def test_plane_wave_rejects_non_root():
    with pytest.raises(ValueError):
        PlaneWave1D(1.0, 5.0, 1 + 1j, MaterialParams(1, 1, 3, 10))


@pytest.mark.parametrize("branch", ["right", "left", "decaying"])
@pytest.mark.parametrize("t", [0.0, 0.7])
def test_history_integrals_against_quadrature(branch, t):
    m = MaterialParams(1, 1, 3, 10)
    w = PlaneWave1D.from_dispersion(m, 5.0, branch=branch)
    x = 0.3
    E, psi, phi = plane_wave_eval(w, x, t)

    def integrand(tau, power, part):
        v = tau**power * np.exp(-m.gamma * tau) * plane_wave_eval(w, x, t - tau)[0]
        return getattr(v, part)

    # the kernel times E decays like exp(-Re(s + gamma) tau)
    upper = 40 / (w.s + m.gamma).real
    for power, target in ((0, psi), (1, phi)):
        re = quad(integrand, 0, upper, args=(power, "real"), limit=400, epsabs=1e-13)[0]
        im = quad(integrand, 0, upper, args=(power, "imag"), limit=400, epsabs=1e-13)[0]
        assert abs(re + 1j * im - target) <= 1e-8


def test_history_integral_divergence_raises():
    # gamma = 0: Re(s) = 0, the integral does not converge
    w = PlaneWave1D.from_dispersion(MaterialParams(1, 1, 1, 0), 2.0)
    with pytest.raises(ValueError):
        plane_wave_eval(w, 0.0, 0.0)


def test_time_factor_consistency():
    w = PlaneWave1D.from_dispersion(MaterialParams(1, 1, 3, 10), 5.0)
    x = np.linspace(-1, 1, 7)
    E0 = w.fields((x,), 0.0)[0]
    E1 = w.fields((x,), 1.3)[0]
    np.testing.assert_allclose(E1, E0 * w.time_factor(1.3), rtol=1e-13)


# ---------------------------------------------------------------------------
# scattering


@pytest.fixture(scope="module")
def scat():
    return scattering_build(np.pi / 5, 1.0, 1.0, 0.0, (VACUUM, AG))


def test_scattering_phase_matching(scat):
    assert scat.k_i[1] == pytest.approx(scat.k_t[1], rel=1e-14)
    assert scat.k_r[1] == pytest.approx(scat.k_i[1], rel=1e-14)
    assert scat.sin_t**2 + scat.cos_t**2 == pytest.approx(1.0, abs=1e-13)
    # each wave satisfies its own dispersion relation
    w = scat.omega
    assert scat.k_t[0] ** 2 + scat.k_t[1] ** 2 == pytest.approx(w**2 * scat.eps2, rel=1e-12)
    assert scat.k_i[0] ** 2 + scat.k_i[1] ** 2 == pytest.approx(w**2 * scat.eps1, rel=1e-12)


@pytest.mark.parametrize("x_mid", [0.0, 0.37])
@pytest.mark.parametrize("theta", [0.1, np.pi / 5, 1.2])
def test_scattering_coefficients_independent_solve(theta, x_mid):
    sol = scattering_build(theta, 1.0, 1.0, x_mid, (MaterialParams(2.0), AG))
    # unknowns (R, T); tangential E and normal D continuous at x = x_mid, y = 0
    ei = np.exp(1j * sol.k_i[0] * x_mid)
    er = np.exp(1j * sol.k_r[0] * x_mid)
    et = np.exp(1j * sol.k_t[0] * x_mid)
    A = np.array(
        [
            [sol.ay1 * er, -sol.ay2 * et],
            [-sol.eps1 * sol.ax1 * er, -sol.eps2 * sol.ax2 * et],
        ]
    )
    b = np.array([-sol.ay1 * ei, -sol.eps1 * sol.ax1 * ei])
    R, T = np.linalg.solve(A, b)
    assert sol.R == pytest.approx(R, rel=1e-12)
    assert sol.T == pytest.approx(T, rel=1e-12)


def test_scattering_field_jumps_and_divergence(scat):
    y = np.linspace(0, 1, 9)
    eL = np.array(scat.fields((np.zeros_like(y), y), 0.4, side="left")[0])
    eR = np.array(scat.fields((np.zeros_like(y), y), 0.4, side="right")[0])
    np.testing.assert_allclose(eL[1], eR[1], atol=1e-13)
    np.testing.assert_allclose(scat.eps1 * eL[0], scat.eps2 * eR[0], atol=1e-12)
    # divergence free: k . a = 0 for every plane wave component
    for (kx, ky), (ax, ay) in (
        (scat.k_i, (scat.ax1, scat.ay1)),
        (scat.k_r, (-scat.ax1, scat.ay1)),
        (scat.k_t, (scat.ax2, scat.ay2)),
    ):
        assert abs(kx * ax + ky * ay) < 1e-12


def test_scattering_eval_and_time(scat):
    x, y = np.meshgrid(np.linspace(-1, 1, 5), np.linspace(0, 1, 4))
    ex, ey = scattering_eval(scat, x, y, 2.0)
    ex0, ey0 = scattering_eval(scat, x, y, 0.0)
    np.testing.assert_allclose(ex, ex0 * np.exp(-2j), rtol=1e-13)
    np.testing.assert_allclose(ey, ey0 * np.exp(-2j), rtol=1e-13)


@pytest.mark.parametrize(
    "args",
    [
        (np.pi / 2, 1.0),
        (-0.1, 1.0),
        (0.3, 0.0),
    ],
)
def test_scattering_bad_inputs(args):
    with pytest.raises(ValueError):
        scattering_build(*args, 1.0, 0.0, (VACUUM, AG))


def test_scattering_requires_equal_mu():
    with pytest.raises(ValueError):
        scattering_build(0.3, 1.0, 1.0, 0.0, (MaterialParams(1, 2), AG))


# ---------------------------------------------------------------------------
# surface plasmon


@pytest.fixture(scope="module")
def spp():
    return spp_build(0.6, 1.0, 0.0, (VACUUM, AG))


def test_spp_localization(spp):
    assert spp.alpha1.real > 0 > spp.alpha2.real
    assert spp.beta.imag > 0
    for a, eps in ((spp.alpha1, spp.eps1), (spp.alpha2, spp.eps2)):
        assert a**2 == pytest.approx(spp.beta**2 - spp.omega**2 * eps, rel=1e-12)
    # the ratio condition between the two decay rates
    assert spp.alpha1 / spp.eps1 == pytest.approx(spp.alpha2 / spp.eps2, rel=1e-13)


def test_spp_fields_decay_and_jumps(spp):
    x = np.array([-1.0, -0.5, 0.0, 0.5, 1.0])
    ex, ey, *_ = spp_eval(spp, x, np.zeros_like(x), 0.0)
    mag = np.abs(ey)
    assert mag[0] < mag[1] < mag[2] and mag[4] < mag[3] < mag[2]
    eL = spp.fields((np.zeros(3), np.array([0.0, 0.2, 0.9])), 1.0, side="left")[0]
    eR = spp.fields((np.zeros(3), np.array([0.0, 0.2, 0.9])), 1.0, side="right")[0]
    np.testing.assert_allclose(eL[1], eR[1], atol=1e-13)
    np.testing.assert_allclose(spp.eps1 * eL[0], spp.eps2 * eR[0], atol=1e-12)
    # y decay along propagation
    e_far = spp_eval(spp, 0.0, 1.0, 0.0)[1]
    assert abs(e_far) < abs(ey[2])


def test_spp_auxiliaries(spp):
    _, ey, _, psiy, _, phiy = spp_eval(spp, 0.5, 0.3, 0.2)
    d = 1j * spp.omega + AG.gamma
    assert psiy == pytest.approx(ey / d, rel=1e-13)
    assert phiy == pytest.approx(ey / d**2, rel=1e-13)


def test_spp_not_localized_raises():
    # two ordinary dielectrics admit no bound mode
    with pytest.raises(ValueError):
        spp_build(1.0, 1.0, 0.0, (VACUUM, MaterialParams(2.0)))


def test_spp_bad_side_argument(spp):
    with pytest.raises(ValueError):
        spp.fields((np.zeros(1), np.zeros(1)), 0.0, side="middle")
