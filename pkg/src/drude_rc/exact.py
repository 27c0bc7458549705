"""Closed-form reference solutions with their auxiliary convolutions.

Three solutions are provided:

* :class:`PlaneWave1D`, a damped/dispersive plane wave ``E0 exp(ikx + st)``
  whose rate ``s`` solves the Drude dispersion cubic;
* :class:`ScatteringSolution`, a time-harmonic plane wave reflected and
  transmitted at the planar interface ``x = x_mid``;
* :class:`SppSolution`, the surface plasmon polariton bound to that interface.

For a field varying in time as ``exp(s t)`` the history integrals are

    psi = int_0^inf exp(-gamma tau) E(t - tau) dtau = E / (s + gamma)
    phi = int_0^inf tau exp(-gamma tau) E(t - tau) dtau = E / (s + gamma)**2

which is what every solution uses to seed the solver history.  All field
values are complex; the physical field is the real part.

Every solution exposes ``fields(coords, t, side=None)`` returning
``(E, psi, phi)``, each with a leading component axis.  ``side`` forces the
formula of one subdomain ("left" or "right") so that smooth extensions into
ghost cells across the interface can be evaluated.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Protocol, Sequence

import numpy as np

from .materials import MaterialParams, permittivity_hat


class ExactSolution(Protocol):
    dims: int
    ncomp: int

    def fields(
        self, coords: Sequence[np.ndarray], t: float, side: str | None = None
    ) -> tuple[np.ndarray, np.ndarray, np.ndarray]: ...

    def time_factor(self, t: float) -> complex: ...


def _auxiliaries(E: np.ndarray, s: complex, m: MaterialParams) -> tuple[np.ndarray, np.ndarray]:
    if not m.is_dispersive:
        return np.zeros_like(E), np.zeros_like(E)
    d = s + m.gamma
    return E / d, E / d**2


# ---------------------------------------------------------------------------
# 1D plane wave
# ---------------------------------------------------------------------------


class DispersionRoots(NamedTuple):
    """Roots of the dispersion cubic.

    ``right`` is the root with the largest imaginary part, ``left`` the one
    with the smallest, and ``decaying`` the remaining (real or nearly real)
    root.
    """

    right: complex
    left: complex
    decaying: complex


def dispersion_coeffs(c: float, omega_p: float, eps_r: float, gamma: float, k: float) -> np.ndarray:
    """Coefficients of ``s^3 + gamma s^2 + (c^2 k^2 + omega_p^2/eps_r) s + gamma c^2 k^2``."""
    ck2 = (c * k) ** 2
    return np.array([1.0, gamma, ck2 + omega_p**2 / eps_r, gamma * ck2])


def _polish(coeffs: np.ndarray, z: complex, steps: int = 3) -> complex:
    dp = np.polyder(coeffs)
    for _ in range(steps):
        d = np.polyval(dp, z)
        if d == 0:
            break
        z = z - np.polyval(coeffs, z) / d
    return complex(z)


def dispersion_roots(
    c: float, omega_p: float, eps_r: float, gamma: float, k: float
) -> DispersionRoots:
    """All three growth rates ``s`` of a Drude plane wave ``exp(ikx + st)``.

    Examples
    --------
    >>> r = dispersion_roots(1.0, 0.0, 1.0, 2.0, 3.0)
    >>> [round(z.real, 12) + 1j * round(z.imag, 12) for z in r]
    [3j, -3j, (-2+0j)]
    """
    if min(c, omega_p, gamma) < 0 or eps_r <= 0:
        raise ValueError("parameters must be nonnegative with eps_r > 0")
    coeffs = dispersion_coeffs(c, omega_p, eps_r, gamma, k)
    roots = [_polish(coeffs, z) for z in np.roots(coeffs)]
    if len(roots) < 3:  # np.roots drops zeros at infinity only; pad exact zeros
        roots += [0j] * (3 - len(roots))
    by_imag = sorted(roots, key=lambda z: z.imag)
    return DispersionRoots(right=by_imag[2], left=by_imag[0], decaying=by_imag[1])


@dataclass(frozen=True)
class PlaneWave1D:
    """``E(x, t) = amplitude * exp(i k x + s t)`` in a homogeneous Drude medium."""

    amplitude: complex
    k: float
    s: complex
    material: MaterialParams
    dims: int = field(default=1, init=False)
    ncomp: int = field(default=1, init=False)

    def __post_init__(self) -> None:
        m = self.material
        coeffs = dispersion_coeffs(m.c, m.omega_p, m.eps_r, m.gamma, self.k)
        res = abs(np.polyval(coeffs, self.s))
        scale = max(1.0, abs(self.s) ** 3, float(np.max(np.abs(coeffs))))
        if res > 1e-9 * scale:
            raise ValueError(f"s = {self.s} does not solve the dispersion cubic (residual {res:.3e})")

    @classmethod
    def from_dispersion(
        cls, material: MaterialParams, k: float, amplitude: complex = 1.0, branch: str = "right"
    ) -> "PlaneWave1D":
        roots = dispersion_roots(material.c, material.omega_p, material.eps_r, material.gamma, k)
        return cls(amplitude, k, getattr(roots, branch), material)

    def time_factor(self, t: float) -> complex:
        """``fields(coords, t) == fields(coords, 0) * time_factor(t)``."""
        return complex(np.exp(self.s * t))

    def fields(self, coords, t, side=None):
        (x,) = coords
        x = np.asarray(x, dtype=float)
        E = self.amplitude * np.exp(1j * self.k * x + self.s * t)
        d = self.s + self.material.gamma
        return E[None], (E / d)[None], (E / d**2)[None]


def plane_wave_eval(w: PlaneWave1D, x, t: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return ``(E, psi, phi)`` of a plane wave, using the closed-form convolutions.

    Raises
    ------
    ValueError
        If ``Re(s + gamma) <= 0``, where the history integrals diverge.
    """
    if (w.s + w.material.gamma).real <= 0:
        raise ValueError("history integrals diverge for Re(s + gamma) <= 0")
    E, psi, phi = w.fields((x,), t)
    return E[0], psi[0], phi[0]


# ---------------------------------------------------------------------------
# Two-sided solutions
# ---------------------------------------------------------------------------


def _csqrt(z: complex) -> complex:
    return complex(np.sqrt(complex(z)))


def _sides(x: np.ndarray, x_mid: float, side: str | None) -> np.ndarray:
    """Boolean mask that is True where the left-hand formula applies."""
    if side is None:
        return x <= x_mid
    if side == "left":
        return np.ones(x.shape, dtype=bool)
    if side == "right":
        return np.zeros(x.shape, dtype=bool)
    raise ValueError(f"side must be 'left', 'right' or None, got {side!r}")


@dataclass(frozen=True)
class ScatteringSolution:
    """Plane wave incident from the left on the interface ``x = x_mid``.

    Time dependence is ``exp(-i omega t)``.  The permittivities ``eps1`` and
    ``eps2`` are the complex Drude values for that convention.
    """

    theta_i: float
    omega: float
    amplitude: float
    x_mid: float
    materials: tuple[MaterialParams, MaterialParams]
    eps1: complex
    eps2: complex
    k_i: tuple[complex, complex]
    k_r: tuple[complex, complex]
    k_t: tuple[complex, complex]
    sin_t: complex
    cos_t: complex
    R: complex
    T: complex
    ax1: float
    ay1: float
    ax2: complex
    ay2: complex
    dims: int = field(default=2, init=False)
    ncomp: int = field(default=2, init=False)

    def time_factor(self, t: float) -> complex:
        return complex(np.exp(-1j * self.omega * t))

    def fields(self, coords, t, side=None):
        x, y = (np.asarray(c, dtype=float) for c in coords)
        x, y = np.broadcast_arrays(x, y)
        left = _sides(x, self.x_mid, side)
        tphase = self.time_factor(t)
        inc = np.exp(1j * (self.k_i[0] * x + self.k_i[1] * y)) * tphase
        ref = self.R * np.exp(1j * (self.k_r[0] * x + self.k_r[1] * y)) * tphase
        tra = self.T * np.exp(1j * (self.k_t[0] * x + self.k_t[1] * y)) * tphase
        ex = np.where(left, self.ax1 * (inc - ref), self.ax2 * tra)
        ey = np.where(left, self.ay1 * (inc + ref), self.ay2 * tra)
        E = np.stack([ex, ey])
        s = -1j * self.omega
        psi = np.zeros_like(E)
        phi = np.zeros_like(E)
        for mask, m in ((left, self.materials[0]), (~left, self.materials[1])):
            p, q = _auxiliaries(E, s, m)
            psi = np.where(mask, p, psi)
            phi = np.where(mask, q, phi)
        return E, psi, phi


def scattering_build(
    theta_i: float,
    omega: float,
    amplitude: float,
    x_mid: float,
    materials: tuple[MaterialParams, MaterialParams],
) -> ScatteringSolution:
    """Assemble the reflected/transmitted plane-wave solution.

    The left material is normally a plain dielectric, but dispersive media on
    both sides are accepted.  The reflection and transmission coefficients
    satisfy the interface conditions only when both sides share the same
    permeability, so unequal ``mu_r`` is rejected.

    Raises
    ------
    ValueError
        On bad angles or frequency, unequal permeabilities, or a vanishing
        Fresnel denominator.
    """
    if not 0 <= theta_i < np.pi / 2:
        raise ValueError("theta_i must lie in [0, pi/2)")
    if not omega > 0:
        raise ValueError("omega must be positive")
    m1, m2 = materials
    if m1.mu_r != m2.mu_r:
        raise ValueError("the plane-wave scattering solution requires equal permeabilities")
    eps1 = permittivity_hat(m1, -omega)
    eps2 = permittivity_hat(m2, -omega)
    n1 = _csqrt(eps1 * m1.mu_r)
    n2 = _csqrt(eps2 * m2.mu_r)
    si, ci = np.sin(theta_i), np.cos(theta_i)
    sin_t = n1 / n2 * si
    cos_t = _csqrt(1 - (eps1 * m1.mu_r) / (eps2 * m2.mu_r) * si**2)
    k_i = (omega * n1 * ci, omega * n1 * si)
    k_r = (-omega * n1 * ci, omega * n1 * si)
    k_t = (omega * n2 * cos_t, omega * n2 * sin_t)
    denom = n1 * cos_t + n2 * ci
    if abs(denom) < 1e-14 * (abs(n1) + abs(n2)):
        raise ValueError("singular configuration: Fresnel denominator vanishes")
    R = np.exp(2j * k_i[0] * x_mid) * (n1 * cos_t - n2 * ci) / denom
    T = np.exp(1j * (k_i[0] - k_t[0]) * x_mid) * 2 * n1 * ci / denom
    return ScatteringSolution(
        theta_i=theta_i,
        omega=omega,
        amplitude=amplitude,
        x_mid=x_mid,
        materials=(m1, m2),
        eps1=eps1,
        eps2=eps2,
        k_i=k_i,
        k_r=k_r,
        k_t=k_t,
        sin_t=sin_t,
        cos_t=cos_t,
        R=complex(R),
        T=complex(T),
        ax1=amplitude * si,
        ay1=-amplitude * ci,
        ax2=amplitude * sin_t,
        ay2=-amplitude * cos_t,
    )


def scattering_eval(sol: ScatteringSolution, x, y, t: float) -> tuple[np.ndarray, np.ndarray]:
    """Electric field ``(E_x, E_y)`` of the scattering solution."""
    E, _, _ = sol.fields((x, y), t)
    return E[0], E[1]


@dataclass(frozen=True)
class SppSolution:
    """Surface plasmon polariton with time dependence ``exp(+i omega t)``.

    Fields vary as ``exp(alpha_j (x - x_mid)) exp(i beta y)``.  ``beta`` is
    chosen with ``Im(beta) > 0``, so the mode travels toward ``+y`` and decays
    along its path.
    """

    omega: float
    amplitude: complex
    x_mid: float
    materials: tuple[MaterialParams, MaterialParams]
    eps1: complex
    eps2: complex
    beta: complex
    alpha1: complex
    alpha2: complex
    dims: int = field(default=2, init=False)
    ncomp: int = field(default=2, init=False)

    def time_factor(self, t: float) -> complex:
        return complex(np.exp(1j * self.omega * t))

    def fields(self, coords, t, side=None):
        x, y = (np.asarray(c, dtype=float) for c in coords)
        x, y = np.broadcast_arrays(x, y)
        left = _sides(x, self.x_mid, side)
        A = self.amplitude
        common = np.exp(1j * self.beta * y) * self.time_factor(t)
        xi = x - self.x_mid
        e1 = A * np.exp(self.alpha1 * xi) * common
        e2 = A * np.exp(self.alpha2 * xi) * common
        ratio = 1j * self.alpha1 / self.beta
        ex = np.where(left, e1, self.eps1 / self.eps2 * e2)
        ey = np.where(left, ratio * e1, ratio * e2)
        E = np.stack([ex, ey])
        s = 1j * self.omega
        psi = np.zeros_like(E)
        phi = np.zeros_like(E)
        for mask, m in ((left, self.materials[0]), (~left, self.materials[1])):
            p, q = _auxiliaries(E, s, m)
            psi = np.where(mask, p, psi)
            phi = np.where(mask, q, phi)
        return E, psi, phi


def spp_build(
    omega: float, amplitude: complex, x_mid: float, materials: tuple[MaterialParams, MaterialParams]
) -> SppSolution:
    """Construct the bound interface mode at frequency ``omega``.

    Raises
    ------
    ValueError
        If ``eps2**2 == eps1**2`` (resonance pole) or the mode is not
        localized on both sides.
    """
    if not omega > 0:
        raise ValueError("omega must be positive")
    m1, m2 = materials
    eps1 = permittivity_hat(m1, omega)
    eps2 = permittivity_hat(m2, omega)
    mu1, mu2 = m1.mu_r, m2.mu_r
    den = eps2**2 - eps1**2
    if abs(den) < 1e-12 * max(abs(eps1), abs(eps2)) ** 2:
        raise ValueError("singular SPP denominator eps2^2 - eps1^2")
    beta = omega * _csqrt(eps1 * eps2 * (mu1 * eps2 - mu2 * eps1) / den)
    if beta.imag < 0:
        beta = -beta
    alpha1 = _csqrt(beta**2 - omega**2 * mu1 * eps1)
    alpha2 = alpha1 * eps2 / eps1
    if not (alpha1.real > 0 > alpha2.real):
        raise ValueError("mode is not localized at the interface")
    sol = SppSolution(omega, amplitude, x_mid, (m1, m2), eps1, eps2, complex(beta), alpha1, alpha2)
    for a, mu, eps in ((alpha1, mu1, eps1), (alpha2, mu2, eps2)):
        target = beta**2 - omega**2 * mu * eps
        if abs(a**2 - target) > 1e-10 * max(abs(target), 1e-300):
            raise ValueError("SPP dispersion relation not satisfied")
    return sol


def spp_eval(sol: SppSolution, x, y, t: float) -> tuple[np.ndarray, ...]:
    """Return ``(E_x, E_y, psi_x, psi_y, phi_x, phi_y)`` of the SPP mode."""
    E, psi, phi = sol.fields((x, y), t)
    return E[0], E[1], psi[0], psi[1], phi[0], phi[1]
