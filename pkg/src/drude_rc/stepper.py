"""RC2 and RC4 time stepping for the Drude wave equation.

The scaled governing equation is

    E_tt = c^2 Delta E - w E + w gamma psi,    w = omega_p^2 / eps_r,

with ``psi(t) = int_0^inf exp(-gamma tau) E(t - tau) dtau``.  RC4 also uses
``phi(t) = int_0^inf tau exp(-gamma tau) E(t - tau) dtau``.  Both history
integrals are advanced by recursive convolution, so only a few field levels
are kept.

A step has three stages:

1. the interior update of ``E^{n+1}`` on nodes ``0..n`` of every axis,
2. a caller-supplied ghost/boundary fill of ``E^{n+1}``,
3. the ``psi``/``phi`` recursions on every node, ghosts included.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .grid import StructuredGrid, biharmonic_2h, crop, laplacian_2h, laplacian_4h
from .materials import MaterialParams

FillFn = Callable[[np.ndarray, float], None]


@dataclass
class FieldHistory:
    """Multilevel field storage on one padded grid.

    ``E[0]`` is the newest level ``E^n``, ``E[1]`` is ``E^{n-1}`` and so on.
    Every array has shape ``(ncomp, *grid.shape)``.  ``phi`` is ``None`` for
    RC2.
    """

    E: list[np.ndarray]
    psi: np.ndarray
    phi: np.ndarray | None
    t: float
    dt: float

    def __post_init__(self) -> None:
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        shapes = {a.shape for a in self.E} | {self.psi.shape}
        if self.phi is not None:
            shapes.add(self.phi.shape)
        if len(shapes) != 1:
            raise ValueError("all history arrays must share one shape")

    @property
    def order(self) -> int:
        return 2 if len(self.E) == 2 else 4

    def copy(self) -> "FieldHistory":
        return FieldHistory(
            [a.copy() for a in self.E],
            self.psi.copy(),
            None if self.phi is None else self.phi.copy(),
            self.t,
            self.dt,
        )


@dataclass(frozen=True)
class SchemeConfig:
    order: int
    material: MaterialParams
    c: float = field(init=False)

    def __post_init__(self) -> None:
        if self.order not in (2, 4):
            raise ValueError("order must be 2 or 4")
        object.__setattr__(self, "c", self.material.c)


class Rc4Weights(NamedTuple):
    """Exact rational weights behind the RC4 history recursions."""

    #: weights of ``E^{n-m}``, m = 0, 1, 2, 3, in the open psi sum; later terms use 1
    open_sum: tuple[Fraction, ...]
    #: rule on the newest interval, for samples (v0, v1, v2, v3)
    one_sided: tuple[Fraction, ...]
    #: four-point rule on an interior interval, for (v_{m-1}, v_m, v_{m+1}, v_{m+2})
    centered: tuple[Fraction, ...]
    #: weights of (E^n, E^{n-1}, E^{n-2}, E^{n-3}) in the psi recursion
    psi_recursion: tuple[Fraction, ...]
    #: weights of (E^n, E^{n-1}, E^{n-2}, E^{n-3}) in the phi recursion
    phi_recursion: tuple[Fraction, ...]


def quadrature_weights_rc4() -> Rc4Weights:
    F = Fraction
    return Rc4Weights(
        open_sum=(F(1, 3), F(31, 24), F(5, 6), F(25, 24)),
        one_sided=(F(9, 24), F(19, 24), F(-5, 24), F(1, 24)),
        centered=(F(-1, 24), F(13, 24), F(13, 24), F(-1, 24)),
        psi_recursion=(F(23, 24), F(-11, 24), F(5, 24), F(-1, 24)),
        phi_recursion=(F(2, 3), F(-7, 24), F(1, 6), F(-1, 24)),
    )


_W = quadrature_weights_rc4()
_PSI_W = tuple(float(w) for w in _W.psi_recursion)
_PHI_W = tuple(float(w) for w in _W.phi_recursion)


def _nodes(u: np.ndarray, ghost: int, width: int, ndim: int) -> np.ndarray:
    """Restrict the output of a width-``width`` operator to nodes ``0..n``."""
    return crop(u, ghost - width, ndim)


def rc2_interior(hist: FieldHistory, cfg: SchemeConfig, h: Sequence[float], ghost: int) -> np.ndarray:
    """``E^{n+1}`` on nodes ``0..n``; ghost entries of the result are zero."""
    m = cfg.material
    dt = hist.dt
    w = m.plasma_ratio
    nd = len(h)
    E, Eold = hist.E
    lap = _nodes(laplacian_2h(E, h), ghost, 1, nd)
    core = lambda a: crop(a, ghost, nd)  # noqa: E731
    rhs = cfg.c**2 * lap
    if w:
        rhs = rhs - w * core(E) + w * m.gamma * core(hist.psi)
    out = np.zeros_like(E)
    idx = (slice(None),) * (E.ndim - nd) + (slice(ghost, -ghost),) * nd
    out[idx] = 2 * core(E) - core(Eold) + dt * dt * rhs
    return out


def rc4_interior(hist: FieldHistory, cfg: SchemeConfig, h: Sequence[float], ghost: int) -> np.ndarray:
    """Fourth-order modified-equation update of ``E^{n+1}`` on nodes ``0..n``."""
    m = cfg.material
    dt = hist.dt
    c2 = cfg.c**2
    w = m.plasma_ratio
    g = m.gamma
    nd = len(h)
    E, E1 = hist.E[0], hist.E[1]
    core = lambda a: crop(a, ghost, nd)  # noqa: E731
    lap4 = _nodes(laplacian_4h(E, h), ghost, 2, nd)
    lap2 = _nodes(laplacian_2h(E, h), ghost, 1, nd)
    bih = _nodes(biharmonic_2h(E, h), ghost, 2, nd)
    first = c2 * lap4
    second = c2 * c2 * bih
    if w:
        Ec, psic, phic = core(E), core(hist.psi), core(hist.phi)
        lap2psi = _nodes(laplacian_2h(hist.psi, h), ghost, 1, nd)
        first = first - w * Ec + w * g * psic
        second = second - 2 * c2 * w * lap2 + 2 * c2 * w * g * lap2psi
        second = second + w * w * (Ec - 2 * g * psic + g * g * phic)
    out = np.zeros_like(E)
    idx = (slice(None),) * (E.ndim - nd) + (slice(ghost, -ghost),) * nd
    out[idx] = 2 * core(E) - core(E1) + dt * dt * first + dt**4 / 12 * second
    return out


def rc2_auxiliary(hist: FieldHistory, E_new: np.ndarray, gamma: float) -> np.ndarray:
    """Trapezoidal recursive convolution for ``psi^{n+1}`` (elementwise)."""
    dt = hist.dt
    e = np.exp(-gamma * dt)
    return 0.5 * dt * E_new + 0.5 * dt * e * hist.E[0] + e * hist.psi


def rc4_auxiliary(
    hist: FieldHistory, E_new: np.ndarray, gamma: float
) -> tuple[np.ndarray, np.ndarray]:
    """Fourth-order recursive convolutions for ``psi^{n+1}`` and ``phi^{n+1}``."""
    dt = hist.dt
    e = np.exp(-gamma * dt)
    E = hist.E
    psi_hist = sum(_PSI_W[j] * e**j * E[j] for j in range(4))
    phi_hist = sum(_PHI_W[j] * e ** (j + 1) * E[j] for j in range(4))
    psi = e * hist.psi + dt / 3 * E_new + e * dt * psi_hist
    phi = e * hist.phi + dt * e * hist.psi + dt * dt * phi_hist
    return psi, phi


def rc4_psi_known(hist: FieldHistory, gamma: float) -> np.ndarray:
    """Part of ``psi^{n+1}`` that does not depend on ``E^{n+1}``."""
    return rc4_auxiliary(hist, np.zeros_like(hist.psi), gamma)[0]


def advance(hist: FieldHistory, E_new: np.ndarray, cfg: SchemeConfig) -> FieldHistory:
    """Run the history recursions and shift the levels by one step."""
    g = cfg.material.gamma
    if cfg.order == 2:
        psi = rc2_auxiliary(hist, E_new, g)
        phi = None
    else:
        psi, phi = rc4_auxiliary(hist, E_new, g)
    levels = [E_new] + hist.E[:-1]
    return FieldHistory(levels, psi, phi, hist.t + hist.dt, hist.dt)


def _step(hist, cfg, grid, fill, interior) -> FieldHistory:
    E_new = interior(hist, cfg, grid.h, grid.ghost)
    if fill is not None:
        fill(E_new, hist.t + hist.dt)
    return advance(hist, E_new, cfg)


def rc2_step(
    hist: FieldHistory, cfg: SchemeConfig, grid: StructuredGrid, fill: FillFn | None = None
) -> FieldHistory:
    """Advance one RC2 step.

    ``fill(E_new, t_new)`` must populate ghost and boundary values of
    ``E_new`` in place before the ``psi`` recursion runs.
    """
    if cfg.order != 2 or len(hist.E) != 2:
        raise ValueError("rc2_step needs an order-2 configuration and two levels")
    return _step(hist, cfg, grid, fill, rc2_interior)


def rc4_step(
    hist: FieldHistory, cfg: SchemeConfig, grid: StructuredGrid, fill: FillFn | None = None
) -> FieldHistory:
    """Advance one RC4 step (see :func:`rc2_step` for ``fill``)."""
    if cfg.order != 4 or len(hist.E) != 4 or hist.phi is None:
        raise ValueError("rc4_step needs an order-4 configuration, four levels and phi")
    return _step(hist, cfg, grid, fill, rc4_interior)


def step(hist: FieldHistory, cfg: SchemeConfig, grid: StructuredGrid, fill: FillFn | None = None) -> FieldHistory:
    return (rc2_step if cfg.order == 2 else rc4_step)(hist, cfg, grid, fill)


def interior_update(hist: FieldHistory, cfg: SchemeConfig, grid: StructuredGrid) -> np.ndarray:
    return (rc2_interior if cfg.order == 2 else rc4_interior)(hist, cfg, grid.h, grid.ghost)


def init_history(
    exact, grid: StructuredGrid, t0: float, dt: float, order: int, side: str | None = None
) -> FieldHistory:
    """Seed a history from an exact solution.

    E levels are the real parts of the exact field at ``t0, t0 - dt, ...``;
    ``psi`` and ``phi`` are the real parts of the closed-form convolutions at
    ``t0``.  Ghost nodes are included.
    """
    if order not in (2, 4):
        raise ValueError("order must be 2 or 4")
    coords = grid.mesh()
    levels = []
    for m in range(order if order == 4 else 2):
        E, _, _ = exact.fields(coords, t0 - m * dt, side=side)
        levels.append(np.ascontiguousarray(E.real))
    _, psi, phi = exact.fields(coords, t0, side=side)
    return FieldHistory(levels, psi.real.copy(), phi.real.copy() if order == 4 else None, t0, dt)
