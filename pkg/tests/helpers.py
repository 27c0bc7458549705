"""Shared drivers for the interface tests."""

from __future__ import annotations

import numpy as np

from drude_rc.exact import scattering_build
from drude_rc.grid import StructuredGrid
from drude_rc.harness import stable_step
from drude_rc.interface import Subdomain, TwoDomainProblem, fill_outer_boundary
from drude_rc.materials import MaterialParams
from drude_rc.stepper import SchemeConfig, init_history, step

#: dispersive medium placed on both sides of the interface
SAME = MaterialParams(2.0, 1.0, 0.5, 0.1)


def identical_material_run(order: int, n: int, omega: float = 3.0, material: MaterialParams = SAME):
    """Run a plane wave through an interface between identical media.

    Returns the final problem, the maximum deviation of the interface ghosts
    from the exact solution, and the maximum difference from the same run on
    one uninterrupted grid.
    """
    g = order // 2
    ex = scattering_build(np.pi / 5, omega, 1.0, 0.0, (material, material))
    gl = StructuredGrid.uniform([-1, 0], [0, 1], [n, n], g)
    gr = StructuredGrid.uniform([0, 0], [1, 1], [n, n], g)
    T = 2 * np.pi / omega
    bound = stable_step(order, [material], gl.h)
    steps = int(np.ceil(T / (0.99 * bound)))
    dt = T / steps
    prob = TwoDomainProblem(
        Subdomain(gl, material, init_history(ex, gl, 0.0, dt, order, side="left")),
        Subdomain(gr, material, init_history(ex, gr, 0.0, dt, order, side="right")),
        0.0,
    )
    gs = StructuredGrid.uniform([-1, 0], [1, 1], [2 * n, n], g)
    hs = init_history(ex, gs, 0.0, dt, order)
    cfg = SchemeConfig(order, material)
    mask = np.ones(gs.shape, bool)
    mask[g + 1 : g + 2 * n, g + 1 : g + n] = False
    X, Y = gs.mesh()
    xs, ys = X[mask], Y[mask]

    def fill(E, t):
        E[:, mask] = ex.fields((xs, ys), t)[0].real

    def bc(p, t, a, b):
        fill_outer_boundary(p, ex, t, a, b)

    for _ in range(steps):
        prob.step(bc)
        hs = step(hs, cfg, gs, fill)
    EL, ER = prob.left.history.E[0], prob.right.history.E[0]
    u = prob.read_ghosts(EL, ER)
    exact_ghosts = prob.read_ghosts(
        *(ex.fields(s.grid.mesh(), prob.t, side=side)[0].real for s, side in ((prob.left, "left"), (prob.right, "right")))
    )
    rows = slice(g + 1, g + n)
    single = hs.E[0]
    neutral = max(
        np.abs(EL[:, :, rows] - single[:, : n + 2 * g + 1, rows]).max(),
        np.abs(ER[:, :, rows] - single[:, n:, rows]).max(),
    )
    return prob, float(np.abs(u - exact_ghosts).max()), float(neutral)
