"""Ghost-cell coupling of two Drude subdomains across the plane ``x = x_mid``.

Each subdomain is a node-centred grid whose last (left side) or first
(right side) column lies on the interface.  After the interior update, the
ghost columns next to the interface are set by discrete jump conditions:

* RC2 uses four conditions per interface node (continuity of the
  divergence, of the tangential curl, of ``Delta E_x / mu`` and of the
  tangential second time derivative);
* RC4 adds four more (third- and fourth-derivative conditions) for the
  second ghost column.  The first four use fourth-order stencils; the last
  four use second-order stencils, so everything fits a 7-point stencil.

The auxiliary fields at time ``n+1`` are affine in ``E^{n+1}`` (``psi`` via
its recursion, ``phi`` not at all).  The conditions are therefore a linear
system ``M u + r0 = 0`` for the ghost unknowns ``u``.  ``M`` depends only on
the grids, materials and time step.  It is assembled once by probing unit
perturbations, factorized once, and reused every step.

The fourth-order conditions apply ``Delta_2h`` at the first ghost column.
That couples the unknowns of neighbouring interface rows, so the RC4 system
is block tridiagonal along the interface rather than a set of independent
8x8 blocks.  :func:`assemble_rc4` returns the per-node 8x8 block with the
neighbour contributions moved to the right-hand side.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from .grid import StructuredGrid
from .materials import MaterialParams
from .stepper import FieldHistory, SchemeConfig, advance, interior_update, rc2_auxiliary, rc4_auxiliary

#: Half-width of the column strip used to evaluate the conditions.
_STRIP = 3
#: Power of ``h`` multiplying each condition (its derivative order).
_SCALE_POWERS = (1, 1, 2, 2, 3, 3, 4, 4)


class GhostSystemError(ArithmeticError):
    """Raised when an interface ghost system is (numerically) singular."""


@dataclass
class Subdomain:
    grid: StructuredGrid
    material: MaterialParams
    history: FieldHistory

    @property
    def cfg(self) -> SchemeConfig:
        return SchemeConfig(self.history.order, self.material)


@dataclass
class GhostSystem:
    """Dense ghost system of one interface node.

    Unknowns are ordered ``[E_x^L, E_y^L, E_x^R, E_y^R]`` for the first
    ghost column on each side, then the same for the second column (RC4).
    """

    matrix: np.ndarray
    rhs: np.ndarray

    def solve(self) -> np.ndarray:
        return np.linalg.solve(self.matrix, self.rhs)

    def residual(self, u: np.ndarray) -> np.ndarray:
        return self.matrix @ u - self.rhs

    def condition(self) -> float:
        return float(np.linalg.cond(self.matrix))


# ---------------------------------------------------------------------------
# column stencils on strips of shape (..., columns, rows)
# ---------------------------------------------------------------------------


class _Ops:
    def __init__(self, hx: float, hy: float):
        self.hx, self.hy = hx, hy

    @staticmethod
    def _rows(v: np.ndarray, k: int) -> np.ndarray:
        """``v`` shifted by ``k`` rows, NaN-padded."""
        out = np.full_like(v, np.nan)
        n = v.shape[-1]
        if k >= 0:
            out[..., : n - k] = v[..., k:]
        else:
            out[..., -k:] = v[..., : n + k]
        return out

    def dy(self, v):
        return (self._rows(v, 1) - self._rows(v, -1)) / (2 * self.hy)

    def dyy(self, v):
        return (self._rows(v, 1) - 2 * v + self._rows(v, -1)) / self.hy**2

    def dy4(self, v):
        r = self._rows
        return (-r(v, 2) + 8 * r(v, 1) - 8 * r(v, -1) + r(v, -2)) / (12 * self.hy)

    def dyy4(self, v):
        r = self._rows
        return (-r(v, 2) + 16 * r(v, 1) - 30 * v + 16 * r(v, -1) - r(v, -2)) / (12 * self.hy**2)

    def dx(self, u, i):
        return (u[..., i + 1, :] - u[..., i - 1, :]) / (2 * self.hx)

    def dx4(self, u, i):
        return (-u[..., i + 2, :] + 8 * u[..., i + 1, :] - 8 * u[..., i - 1, :] + u[..., i - 2, :]) / (12 * self.hx)

    def dxx(self, u, i):
        return (u[..., i + 1, :] - 2 * u[..., i, :] + u[..., i - 1, :]) / self.hx**2

    def dxx4(self, u, i):
        return (
            -u[..., i + 2, :] + 16 * u[..., i + 1, :] - 30 * u[..., i, :] + 16 * u[..., i - 1, :] - u[..., i - 2, :]
        ) / (12 * self.hx**2)

    def lap2(self, u, i):
        return self.dxx(u, i) + self.dyy(u[..., i, :])

    def lap4(self, u, i):
        return self.dxx4(u, i) + self.dyy4(u[..., i, :])

    def lap2_cols(self, u, cols):
        """``Delta_2h u`` evaluated at several columns, stacked on the column axis."""
        return np.stack([self.lap2(u, i) for i in cols], axis=-2)


def _side_conditions(ops: _Ops, m: MaterialParams, E, psi, phi, order: int) -> list[np.ndarray]:
    """Condition values of one side at the strip's centre column.

    ``E``, ``psi`` and ``phi`` have shape ``(2, 2*_STRIP+1, rows)``.  Each
    condition is scaled by ``h^k`` where ``k`` is its derivative order.
    """
    i = _STRIP
    mu, er = m.mu_r, m.eps_r
    wp2 = m.omega_p**2
    g = m.gamma
    h = ops.hx
    Ex, Ey = E[0], E[1]
    if order == 2:
        c1 = ops.dx(Ex, i) + ops.dy(Ey[i])
        c2 = (ops.dy(Ex[i]) - ops.dx(Ey, i)) / mu
        c3 = ops.lap2(Ex, i) / mu
        c4 = (ops.lap2(Ey, i) - mu * wp2 * Ey[i] + mu * wp2 * g * psi[1, i]) / (er * mu)
        return [a * h**p for a, p in zip((c1, c2, c3, c4), _SCALE_POWERS)]
    c1 = ops.dx4(Ex, i) + ops.dy4(Ey[i])
    c2 = (ops.dy4(Ex[i]) - ops.dx4(Ey, i)) / mu
    c3 = ops.lap4(Ex, i) / mu
    c4 = (ops.lap4(Ey, i) - mu * wp2 * Ey[i] + mu * wp2 * g * psi[1, i]) / (er * mu)
    cols = (i - 1, i, i + 1)
    L = ops.lap2_cols(E, cols)  # Delta_2h E at columns i-1, i, i+1
    Lpsi = ops.lap2_cols(psi, cols)
    # F = (Delta - mu w_p^2 + mu w_p^2 gamma psi) applied to E, at the three columns
    F = L - mu * wp2 * E[:, i - 1 : i + 2] + mu * wp2 * g * psi[:, i - 1 : i + 2]
    c5 = (ops.dx(L[0], 1) + ops.dy(L[1, 1])) / mu
    c6 = (ops.dy(F[0, 1]) - ops.dx(F[1], 1)) / (mu * er * mu)
    LL = ops.lap2(L, 1)  # Delta_2h Delta_2h E at the centre column
    c7 = er / (er * mu) ** 2 * (LL[0] - mu * wp2 * L[0, 1] + mu * wp2 * g * Lpsi[0, 1])
    c8 = (
        LL[1]
        + 2 * mu * wp2 * (-L[1, 1] + g * Lpsi[1, 1])
        + mu**2 * wp2**2 * (Ey[i] - 2 * g * psi[1, i] + g * g * phi[1, i])
    ) / (er * mu) ** 2
    return [a * h**p for a, p in zip((c1, c2, c3, c4, c5, c6, c7, c8), _SCALE_POWERS)]


# ---------------------------------------------------------------------------
# problem
# ---------------------------------------------------------------------------


def _check_conforming(left: StructuredGrid, right: StructuredGrid, x_mid: float, ghost: int) -> None:
    if left.dims != 2 or right.dims != 2:
        raise ValueError("interface problems are two-dimensional")
    if left.n[1] != right.n[1] or not np.isclose(left.h[1], right.h[1]) or not np.isclose(
        left.origin[1], right.origin[1]
    ):
        raise ValueError("subdomain grids must share the y nodes")
    if not np.isclose(left.h[0], right.h[0]):
        raise ValueError("subdomain grids must share the x spacing")
    xl = left.origin[0] + left.n[0] * left.h[0]
    if not (np.isclose(xl, x_mid) and np.isclose(right.origin[0], x_mid)):
        raise ValueError("both grids need a node column on x_mid")
    if left.ghost != ghost or right.ghost != ghost:
        raise ValueError("ghost width must match the scheme order")
    if any(left.periodic) or any(right.periodic):
        raise ValueError("interface grids cannot be periodic")


@dataclass
class TwoDomainProblem:
    """Two conforming subdomains sharing the interface column ``x = x_mid``."""

    left: Subdomain
    right: Subdomain
    x_mid: float
    _lu: object = field(default=None, init=False, repr=False)
    _matrix: sp.csr_matrix | None = field(default=None, init=False, repr=False)

    def __post_init__(self) -> None:
        order = self.left.history.order
        if self.right.history.order != order:
            raise ValueError("both sides must use the same scheme")
        if self.left.history.dt != self.right.history.dt:
            raise ValueError("both sides must share the time step")
        _check_conforming(self.left.grid, self.right.grid, self.x_mid, order // 2)
        g = self.ghost
        self._ops = _Ops(self.left.grid.h[0], self.left.grid.h[1])
        self._icL = g + self.left.grid.n[0]
        self._icR = g
        self._rows = slice(g + 1, g + self.left.grid.n[1])  # interface rows 1..Ny-1

    # -- basic properties ---------------------------------------------------

    @property
    def order(self) -> int:
        return self.left.history.order

    @property
    def ghost(self) -> int:
        return self.order // 2

    @property
    def nunk(self) -> int:
        return 4 * self.ghost

    @property
    def nrows(self) -> int:
        return self.left.grid.n[1] - 1

    @property
    def t(self) -> float:
        return self.left.history.t

    @property
    def dt(self) -> float:
        return self.left.history.dt

    # -- strips ----------------------------------------------------------------

    def _strip(self, a: np.ndarray, ic: int) -> np.ndarray:
        """Columns ``ic - _STRIP .. ic + _STRIP``; missing columns are NaN."""
        ncol = a.shape[-2]
        out = np.full(a.shape[:-2] + (2 * _STRIP + 1, a.shape[-1]), np.nan)
        lo, hi = max(ic - _STRIP, 0), min(ic + _STRIP + 1, ncol)
        out[..., lo - ic + _STRIP : hi - ic + _STRIP, :] = a[..., lo:hi, :]
        return out

    def _ghost_index(self, k: int) -> tuple[str, int, int]:
        """Map unknown ``k`` to (side, component, padded column)."""
        ring, slot = divmod(k, 4)
        r = ring + 1
        if slot < 2:
            return "L", slot, self._icL + r
        return "R", slot - 2, self._icR - r

    def _aux_new(self, hist: FieldHistory, E_new: np.ndarray, m: MaterialParams):
        if self.order == 2:
            return rc2_auxiliary(hist, E_new, m.gamma), None
        return rc4_auxiliary(hist, E_new, m.gamma)

    def _residual(self, EL, ER, psiL_known, psiR_known, phiL, phiR) -> np.ndarray:
        """Jump residuals on the strips, shape ``(nunk, nrows)``.

        ``psi*_known`` is the part of ``psi^{n+1}`` independent of ``E^{n+1}``.
        """
        coef = self.dt / 2 if self.order == 2 else self.dt / 3
        psiL = psiL_known + coef * EL
        psiR = psiR_known + coef * ER
        cl = _side_conditions(self._ops, self.left.material, EL, psiL, phiL, self.order)
        cr = _side_conditions(self._ops, self.right.material, ER, psiR, phiR, self.order)
        res = np.stack([a - b for a, b in zip(cl, cr)])
        return res[:, self._rows]

    def _known_parts(self, EL_new, ER_new):
        """Strips of ``E^{n+1}`` plus the ``E^{n+1}``-independent auxiliaries."""
        out = []
        for side, E_new, ic in ((self.left, EL_new, self._icL), (self.right, ER_new, self._icR)):
            hist = side.history
            strip_hist = FieldHistory(
                [self._strip(a, ic) for a in hist.E],
                self._strip(hist.psi, ic),
                None if hist.phi is None else self._strip(hist.phi, ic),
                hist.t,
                hist.dt,
            )
            zero = np.zeros_like(strip_hist.psi)
            psi0, phi0 = self._aux_new(strip_hist, zero, side.material)
            if phi0 is None:
                phi0 = np.zeros_like(psi0)
            out.append((self._strip(E_new, ic), psi0, phi0))
        return out

    def _place(self, EL_strip, ER_strip, u: np.ndarray) -> None:
        """Write unknowns ``u`` (nunk, nrows) into strip copies of the new fields."""
        for k in range(self.nunk):
            side, comp, col = self._ghost_index(k)
            ic = self._icL if side == "L" else self._icR
            target = EL_strip if side == "L" else ER_strip
            target[comp, col - ic + _STRIP, self._rows] = u[k]

    # -- assembly --------------------------------------------------------------

    def _build_matrix(self) -> sp.csr_matrix:
        nunk, nrows = self.nunk, self.nrows
        shape = (2, 2 * _STRIP + 1, self.left.grid.shape[1])
        zeros = np.zeros(shape)
        base = self._residual(zeros, zeros, zeros, zeros, zeros, zeros)
        rows_i, cols_i, vals = [], [], []
        j = np.arange(nrows)
        for k in range(nunk):
            for color in range(3):
                EL = zeros.copy()
                ER = zeros.copy()
                u = np.zeros((nunk, nrows))
                u[k, j % 3 == color] = 1.0
                self._place(EL, ER, u)
                resp = self._residual(EL, ER, zeros, zeros, zeros, zeros) - base
                # the probed row feeding row j is the one among j-1, j, j+1 with this colour
                jp = j + ((color - j + 1) % 3) - 1
                ok = (jp >= 0) & (jp < nrows)
                for kk in range(nunk):
                    v = resp[kk, ok]
                    nz = v != 0
                    rows_i.append((j[ok] * nunk + kk)[nz])
                    cols_i.append((jp[ok] * nunk + k)[nz])
                    vals.append(v[nz])
        n = nunk * nrows
        data = (np.concatenate(vals), (np.concatenate(rows_i), np.concatenate(cols_i)))
        return sp.csr_matrix(data, shape=(n, n))

    @property
    def matrix(self) -> sp.csr_matrix:
        """Sparse ghost matrix over all interface rows (row-major: node, unknown)."""
        if self._matrix is None:
            self._matrix = self._build_matrix()
        return self._matrix

    def _factor(self):
        if self._lu is None:
            M = self.matrix.tocsc()
            try:
                lu = splu(M)
            except RuntimeError as exc:  # exactly singular
                raise GhostSystemError(str(exc)) from exc
            piv = np.abs(lu.U.diagonal())
            if piv.min() < 1e-12 * abs(M).max():
                raise GhostSystemError("interface ghost system is numerically singular")
            self._lu = lu
        return self._lu

    def rhs_vector(self, EL_new, ER_new) -> np.ndarray:
        """``-r0``: residuals of the conditions with all ghost unknowns set to zero."""
        (EL, pL, fL), (ER, pR, fR) = self._known_parts(EL_new, ER_new)
        self._place(EL, ER, np.zeros((self.nunk, self.nrows)))
        return -self._residual(EL, ER, pL, pR, fL, fR)

    def solve_ghosts(self, EL_new: np.ndarray, ER_new: np.ndarray) -> np.ndarray:
        """Solve for the interface ghosts and write them into ``EL_new``/``ER_new``."""
        rhs = self.rhs_vector(EL_new, ER_new)
        b = rhs.T.reshape(-1)
        lu = self._factor()
        u = lu.solve(b)
        u = u + lu.solve(b - self.matrix @ u)  # one step of iterative refinement
        if not np.all(np.isfinite(u)):
            raise GhostSystemError("non-finite ghost values")
        u = u.reshape(self.nrows, self.nunk).T
        self.write_ghosts(EL_new, ER_new, u)
        return u

    def write_ghosts(self, EL_new, ER_new, u) -> None:
        for k in range(self.nunk):
            side, comp, col = self._ghost_index(k)
            (EL_new if side == "L" else ER_new)[comp, col, self._rows] = u[k]

    def read_ghosts(self, EL_new, ER_new) -> np.ndarray:
        u = np.empty((self.nunk, self.nrows))
        for k in range(self.nunk):
            side, comp, col = self._ghost_index(k)
            u[k] = (EL_new if side == "L" else ER_new)[comp, col, self._rows]
        return u

    def residuals(self, EL_new, ER_new, scaled: bool = True) -> np.ndarray:
        """Condition residuals for the ghost values currently stored.

        With ``scaled=False`` the ``h^k`` row scaling is removed, giving the
        jumps of the discrete operators themselves.
        """
        (EL, pL, fL), (ER, pR, fR) = self._known_parts(EL_new, ER_new)
        res = self._residual(EL, ER, pL, pR, fL, fR)
        if not scaled:
            powers = np.array(_SCALE_POWERS[: self.nunk])
            res = res / self.left.grid.h[0] ** powers[:, None]
        return res

    def node_system(self, j_y: int, EL_new, ER_new) -> GhostSystem:
        """Dense system of interface node ``j_y`` (1..Ny-1).

        Neighbour-row ghost values are taken from the arrays and moved to the
        right-hand side.
        """
        if not 1 <= j_y <= self.nrows:
            raise ValueError("j_y must address an interior interface node")
        j = j_y - 1
        nunk = self.nunk
        M = self.matrix
        block = M[j * nunk : (j + 1) * nunk, j * nunk : (j + 1) * nunk].toarray()
        rhs = self.rhs_vector(EL_new, ER_new)[:, j]
        u = self.read_ghosts(EL_new, ER_new)
        for jp in (j - 1, j + 1):
            if 0 <= jp < self.nrows:
                off = M[j * nunk : (j + 1) * nunk, jp * nunk : (jp + 1) * nunk].toarray()
                rhs = rhs - off @ u[:, jp]
        return GhostSystem(block, rhs)

    # -- time stepping ---------------------------------------------------------

    def step(self, boundary: Callable[["TwoDomainProblem", float, np.ndarray, np.ndarray], None]) -> None:
        """Advance both sides one step.

        ``boundary(problem, t_new, EL_new, ER_new)`` fills every non-interface
        ghost and boundary node (see :func:`fill_outer_boundary`).
        """
        L, R = self.left, self.right
        EL_new = interior_update(L.history, L.cfg, L.grid)
        ER_new = interior_update(R.history, R.cfg, R.grid)
        t_new = self.t + self.dt
        boundary(self, t_new, EL_new, ER_new)
        self.solve_ghosts(EL_new, ER_new)
        L.history = advance(L.history, EL_new, L.cfg)
        R.history = advance(R.history, ER_new, R.cfg)


def assemble_rc2(problem: TwoDomainProblem, j_y: int, EL_new, ER_new) -> GhostSystem:
    """4x4 ghost system of interface node ``j_y`` for the RC2 scheme."""
    if problem.order != 2:
        raise ValueError("problem is not second order")
    return problem.node_system(j_y, EL_new, ER_new)


def assemble_rc4(problem: TwoDomainProblem, j_y: int, EL_new, ER_new) -> GhostSystem:
    """8x8 ghost block of interface node ``j_y`` for the RC4 scheme."""
    if problem.order != 4:
        raise ValueError("problem is not fourth order")
    return problem.node_system(j_y, EL_new, ER_new)


# ---------------------------------------------------------------------------
# outer boundary
# ---------------------------------------------------------------------------


def exact_mask(grid: StructuredGrid, side: str) -> np.ndarray:
    """Nodes of a subdomain that take exact data: all except the updated
    interior and the interface ghost unknowns."""
    g = grid.ghost
    nx, ny = grid.n
    mask = np.ones(grid.shape, dtype=bool)
    rows = slice(g + 1, g + ny)
    if side == "left":
        mask[g + 1 :, rows] = False
    else:
        mask[: g + nx, rows] = False
    return mask


def fill_outer_boundary(problem: TwoDomainProblem, exact, t: float, EL_new, ER_new) -> None:
    """Set every non-interface boundary and ghost node to ``Re(exact)`` at ``t``."""
    for sub, E_new, side in ((problem.left, EL_new, "left"), (problem.right, ER_new, "right")):
        cache = getattr(problem, "_bc_cache", {})
        if side not in cache:
            mask = exact_mask(sub.grid, side)
            X, Y = sub.grid.mesh()
            cache[side] = (mask, X[mask], Y[mask])
            problem._bc_cache = cache
        mask, xs, ys = cache[side]
        E, _, _ = exact.fields((xs, ys), t, side=side)
        E_new[:, mask] = E.real
