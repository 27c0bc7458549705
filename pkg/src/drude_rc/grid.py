"""Ghost-padded node-centred grids, centred difference operators and norms.

Field arrays hold the nodes ``j = -g, ..., n + g`` on every axis, so an axis
with ``n`` intervals and ``g`` ghost layers has ``n + 1 + 2g`` entries.
Arrays may carry extra leading axes (for example a component axis).  The
operators act on the trailing ``len(h)`` axes only.

The operators follow a "valid region" convention: a stencil of half-width
``w`` returns an array that is ``w`` entries shorter at both ends of every
spatial axis.  Applying a width-1 operator to a field with one ghost layer
therefore yields values on exactly the nodes ``0..n``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np


@dataclass(frozen=True)
class StructuredGrid:
    """Uniform node-centred grid with ghost layers.

    Parameters
    ----------
    n : tuple of int
        Number of intervals per axis; nodes run from 0 to ``n[d]``.
    h : tuple of float
        Spacing per axis.
    origin : tuple of float
        Coordinates of node 0.
    ghost : int
        Ghost-layer width (1 for RC2, 2 for RC4).
    periodic : tuple of bool
        Per-axis periodicity.  Node ``n[d]`` then duplicates node 0.
    """

    n: tuple[int, ...]
    h: tuple[float, ...]
    origin: tuple[float, ...]
    ghost: int
    periodic: tuple[bool, ...] = ()

    def __post_init__(self) -> None:
        dims = len(self.n)
        if dims not in (1, 2):
            raise ValueError("only 1D and 2D grids are supported")
        periodic = self.periodic or (False,) * dims
        object.__setattr__(self, "periodic", tuple(bool(p) for p in periodic))
        if len(self.h) != dims or len(self.origin) != dims or len(self.periodic) != dims:
            raise ValueError("n, h, origin and periodic must have equal length")
        if self.ghost < 1:
            raise ValueError("ghost width must be at least 1")
        if any(nd < 4 * self.ghost for nd in self.n):
            raise ValueError("each axis needs at least 4*ghost intervals")
        if any(hd <= 0 for hd in self.h):
            raise ValueError("spacings must be positive")

    @classmethod
    def uniform(
        cls, lo: Sequence[float], hi: Sequence[float], n: Sequence[int], ghost: int, periodic=None
    ) -> "StructuredGrid":
        """Grid with ``n[d]`` intervals spanning ``[lo[d], hi[d]]``."""
        n = tuple(int(v) for v in n)
        h = tuple((b - a) / m for a, b, m in zip(lo, hi, n))
        return cls(n, h, tuple(float(a) for a in lo), ghost, tuple(periodic) if periodic else ())

    @property
    def dims(self) -> int:
        return len(self.n)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(nd + 1 + 2 * self.ghost for nd in self.n)

    @property
    def interior(self) -> tuple[slice, ...]:
        """Index of nodes ``0..n`` inside a padded array."""
        g = self.ghost
        return tuple(slice(g, g + nd + 1) for nd in self.n)

    def axis_coords(self, d: int) -> np.ndarray:
        """Coordinates of all nodes along axis ``d``, ghosts included."""
        j = np.arange(-self.ghost, self.n[d] + self.ghost + 1)
        return self.origin[d] + j * self.h[d]

    def mesh(self) -> tuple[np.ndarray, ...]:
        """Broadcastable coordinate arrays over the padded grid."""
        return tuple(np.meshgrid(*(self.axis_coords(d) for d in range(self.dims)), indexing="ij"))

    def zeros(self, ncomp: int | None = None, dtype=float) -> np.ndarray:
        shape = self.shape if ncomp is None else (ncomp,) + self.shape
        return np.zeros(shape, dtype=dtype)

    def fill_periodic(self, u: np.ndarray) -> None:
        """Copy periodic images into the ghost layers (and the duplicate end node) in place."""
        g = self.ghost
        nd_total = len(self.n)
        for d, (nd, per) in enumerate(zip(self.n, self.periodic)):
            if not per:
                continue
            ax = u.ndim - nd_total + d
            v = np.moveaxis(u, ax, 0)
            v[g + nd] = v[g]
            for k in range(1, g + 1):
                v[g + nd + k] = v[g + k]
                v[g - k] = v[g + nd - k]


# ---------------------------------------------------------------------------
# operators
# ---------------------------------------------------------------------------


def _sl(ndim: int, ax: int, s: slice) -> tuple[slice, ...]:
    idx = [slice(None)] * ndim
    idx[ax] = s
    return tuple(idx)


def _shift(u: np.ndarray, ax: int, k: int, w: int) -> np.ndarray:
    """View of ``u`` shifted by ``k`` along ``ax`` and cropped by ``w`` at both ends."""
    n = u.shape[ax]
    return u[_sl(u.ndim, ax, slice(w + k, n - w + k))]


def crop(u: np.ndarray, w: int, ndim: int) -> np.ndarray:
    """Remove ``w`` entries from both ends of the trailing ``ndim`` axes."""
    if w == 0:
        return u
    idx = [slice(None)] * (u.ndim - ndim) + [slice(w, -w)] * ndim
    return u[tuple(idx)]


def _axes(u: np.ndarray, h: Sequence[float]) -> list[int]:
    return list(range(u.ndim - len(h), u.ndim))


def second_difference(u: np.ndarray, h: Sequence[float], d: int) -> np.ndarray:
    """``D+ D-`` along spatial axis ``d``; crops one entry on every spatial axis."""
    ax = _axes(u, h)[d]
    v = (_shift(u, ax, 1, 1) - 2 * _shift(u, ax, 0, 1) + _shift(u, ax, -1, 1)) / h[d] ** 2
    return _crop_others(v, h, d, 1)


def _crop_others(v: np.ndarray, h: Sequence[float], d: int, w: int) -> np.ndarray:
    for e, ax in enumerate(_axes(v, h)):
        if e != d:
            v = v[_sl(v.ndim, ax, slice(w, v.shape[ax] - w))]
    return v


def laplacian_2h(u: np.ndarray, h: Sequence[float]) -> np.ndarray:
    """Second-order Laplacian ``sum_d D+ D-``; crops one layer."""
    return sum(second_difference(u, h, d) for d in range(len(h)))


def laplacian_4h(u: np.ndarray, h: Sequence[float]) -> np.ndarray:
    """Fourth-order Laplacian ``sum_d D+D-(I - h^2/12 D+D-)``; crops two layers."""
    out = 0
    for d, ax in enumerate(_axes(u, h)):
        v = (
            -_shift(u, ax, 2, 2)
            + 16 * _shift(u, ax, 1, 2)
            - 30 * _shift(u, ax, 0, 2)
            + 16 * _shift(u, ax, -1, 2)
            - _shift(u, ax, -2, 2)
        ) / (12 * h[d] ** 2)
        out = out + _crop_others(v, h, d, 2)
    return out


def biharmonic_2h(u: np.ndarray, h: Sequence[float]) -> np.ndarray:
    """``Delta_2h`` applied twice; crops two layers."""
    return laplacian_2h(laplacian_2h(u, h), h)


def d0(u: np.ndarray, h: Sequence[float], d: int) -> np.ndarray:
    """Centred first difference ``D0`` along axis ``d``; crops one layer."""
    ax = _axes(u, h)[d]
    v = (_shift(u, ax, 1, 1) - _shift(u, ax, -1, 1)) / (2 * h[d])
    return _crop_others(v, h, d, 1)


def d0_4th(u: np.ndarray, h: Sequence[float], d: int) -> np.ndarray:
    """Fourth-order first derivative ``D0 (I - h^2/6 D+D-)``; crops two layers."""
    ax = _axes(u, h)[d]
    v = (
        -_shift(u, ax, 2, 2) + 8 * _shift(u, ax, 1, 2) - 8 * _shift(u, ax, -1, 2) + _shift(u, ax, -2, 2)
    ) / (12 * h[d])
    return _crop_others(v, h, d, 2)


def d0_third(u: np.ndarray, h: Sequence[float], d: int) -> np.ndarray:
    """Third derivative ``D0 D+ D-``; crops two layers."""
    ax = _axes(u, h)[d]
    v = (
        _shift(u, ax, 2, 2) - 2 * _shift(u, ax, 1, 2) + 2 * _shift(u, ax, -1, 2) - _shift(u, ax, -2, 2)
    ) / (2 * h[d] ** 3)
    return _crop_others(v, h, d, 2)


# ---------------------------------------------------------------------------
# norms
# ---------------------------------------------------------------------------


def norms(u: np.ndarray, n: Sequence[int] | None = None) -> tuple[float, float, float]:
    """Discrete ``(L1, L2, Linf)`` norms of a nodal array without ghosts.

    The sums run over all ``prod(n_d + 1)`` nodes while the divisor is
    ``prod(n_d)``, where ``n_d`` is one less than the array extent unless
    given explicitly.
    """
    a = np.abs(np.asarray(u))
    if a.size == 0:
        return 0.0, 0.0, 0.0
    if n is None:
        n = tuple(s - 1 for s in a.shape)
    div = float(np.prod(n))
    return float(a.sum() / div), float(np.sqrt((a * a).sum() / div)), float(a.max())
