"""Drude material parameters, frequency-domain permittivity and unit scaling.

All solver code works in scaled units where the vacuum permittivity,
permeability and light speed are one.  Physical inputs (rad/s, 1/s, eV) are
converted once with :func:`scale`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

#: Elementary charge in coulombs (exact SI value).
Q_E = 1.602176634e-19
#: Reduced Planck constant in J s.
HBAR = 1.054571817e-34


@dataclass(frozen=True)
class MaterialParams:
    """Scaled Drude constants for one homogeneous subdomain.

    Parameters
    ----------
    eps_r, mu_r : float
        Relative permittivity and permeability (both positive).
    omega_p : float
        Scaled plasma frequency.  ``omega_p == 0`` means the material is
        non-dispersive.
    gamma : float
        Scaled collision (damping) rate.
    """

    eps_r: float = 1.0
    mu_r: float = 1.0
    omega_p: float = 0.0
    gamma: float = 0.0

    def __post_init__(self) -> None:
        if not self.eps_r > 0:
            raise ValueError(f"eps_r must be positive, got {self.eps_r}")
        if not self.mu_r > 0:
            raise ValueError(f"mu_r must be positive, got {self.mu_r}")
        if not self.omega_p >= 0:
            raise ValueError(f"omega_p must be nonnegative, got {self.omega_p}")
        if not self.gamma >= 0:
            raise ValueError(f"gamma must be nonnegative, got {self.gamma}")

    @property
    def is_dispersive(self) -> bool:
        return self.omega_p > 0

    @property
    def c(self) -> float:
        """Wave speed ``1/sqrt(eps_r mu_r)`` in scaled units."""
        return 1.0 / np.sqrt(self.eps_r * self.mu_r)

    @property
    def plasma_ratio(self) -> float:
        """The coefficient ``omega_p**2 / eps_r`` that multiplies E in the PDE."""
        return self.omega_p**2 / self.eps_r


@dataclass(frozen=True)
class PhysicalMaterial:
    """Drude constants in SI units (frequencies in rad/s, damping in 1/s)."""

    eps_r: float = 1.0
    mu_r: float = 1.0
    omega_p_si: float = 0.0
    gamma_si: float = 0.0

    def __post_init__(self) -> None:
        for name in ("eps_r", "mu_r"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        for name in ("omega_p_si", "gamma_si"):
            if not getattr(self, name) >= 0:
                raise ValueError(f"{name} must be nonnegative")


@dataclass(frozen=True)
class ScalingConvention:
    """Time-scale factor ``c_t`` (1/s); scaled time is ``t_si * c_t``."""

    c_t: float = 1e16

    def __post_init__(self) -> None:
        if not self.c_t > 0:
            raise ValueError(f"c_t must be positive, got {self.c_t}")

    def frequency(self, omega_si: float) -> float:
        """Convert an SI angular frequency (or rate) to scaled units."""
        return omega_si / self.c_t

    def time(self, t_si: float) -> float:
        """Convert an SI time in seconds to scaled units."""
        return t_si * self.c_t


def ev_to_angular(e_ev: float) -> float:
    """Angular frequency ``E q_e / hbar`` in rad/s for a photon energy in eV."""
    if e_ev < 0:
        raise ValueError("energy must be nonnegative")
    return e_ev * Q_E / HBAR


def thz_to_angular(f_thz: float) -> float:
    """Read a frequency quoted in THz as an angular frequency in rad/s.

    The value is multiplied by ``1e12`` with no factor of ``2 pi``; the
    quoted numbers are used directly as ``omega`` in ``exp(i omega t)``.
    """
    return f_thz * 1e12


def scale(p: PhysicalMaterial, s: ScalingConvention = ScalingConvention()) -> MaterialParams:
    """Convert physical Drude parameters to scaled units."""
    return MaterialParams(
        eps_r=p.eps_r,
        mu_r=p.mu_r,
        omega_p=s.frequency(p.omega_p_si),
        gamma=s.frequency(p.gamma_si),
    )


def unscale(m: MaterialParams, s: ScalingConvention = ScalingConvention()) -> PhysicalMaterial:
    """Inverse of :func:`scale`."""
    return PhysicalMaterial(
        eps_r=m.eps_r, mu_r=m.mu_r, omega_p_si=m.omega_p * s.c_t, gamma_si=m.gamma * s.c_t
    )


def permittivity_laplace(m: MaterialParams, s: complex) -> complex:
    """Relative permittivity ``eps_r + omega_p**2 / (s (s + gamma))`` at Laplace variable ``s``."""
    if m.omega_p == 0:
        return complex(m.eps_r)
    s = complex(s)
    if s == 0 or s + m.gamma == 0:
        raise ValueError("Laplace variable sits on a pole of the Drude susceptibility")
    return m.eps_r + m.omega_p**2 / (s * (s + m.gamma))


def permittivity_hat(m: MaterialParams, omega: complex) -> complex:
    """Drude permittivity ``eps_r - omega_p**2 / (omega**2 - i gamma omega)``.

    This is the value for a time dependence ``exp(+i omega t)``.  Use
    ``-omega`` for fields that vary as ``exp(-i omega t)``.

    Raises
    ------
    ValueError
        If ``omega == 0`` while ``omega_p > 0``.
    """
    if m.omega_p == 0:
        return complex(m.eps_r)
    omega = complex(omega)
    if omega == 0:
        raise ValueError("omega = 0 is a pole of the Drude susceptibility")
    return permittivity_laplace(m, 1j * omega)


def silver(s: ScalingConvention = ScalingConvention()) -> MaterialParams:
    """Scaled Drude silver: eps_r = 5, plasma energy 8.9 eV, damping 1e12/17 1/s."""
    return scale(PhysicalMaterial(5.0, 1.0, ev_to_angular(8.9), 1e12 / 17.0), s)


VACUUM = MaterialParams(1.0, 1.0, 0.0, 0.0)
