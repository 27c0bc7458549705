"""Experiment drivers: 1D periodic runs, 2D interface runs, convergence,
spurious-growth fits and stability reports, with CSV output.

CSV files are written with the standard :mod:`csv` module and ``repr``
formatting of floats, so identical configurations produce byte-identical
files and every reported rate can be recomputed from the CSV content.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .exact import PlaneWave1D, scattering_build, spp_build
from .grid import StructuredGrid, norms
from .interface import Subdomain, TwoDomainProblem, fill_outer_boundary
from .materials import VACUUM, MaterialParams, ScalingConvention, silver
from .stability import (
    rc2_roots_from_params,
    rc2_timestep,
    rc4_admissible,
    rc4_quartic_step,
    rc4_roots_from_params,
    rc4_timestep,
)
from .stepper import SchemeConfig, init_history, step

CASES = ("periodic1d", "scatter2d", "spp2d")
SCHEMES = ("rc2", "rc4")

#: Default incident / surface-wave angular frequencies in rad/s.
DEFAULT_OMEGA_SI = {"scatter2d": 1.0e15, "spp2d": 6.0e14}
#: Time scale used by the 2D cases (see the README for the choice).
DEFAULT_CT_2D = 1.0e15
#: Parameters of the 1D dissipative test problem (scaled units).
PERIODIC_MATERIAL = MaterialParams(eps_r=1.0, mu_r=1.0, omega_p=3.0, gamma=10.0)
PERIODIC_K = 5.0


class ConfigError(ValueError):
    """Invalid experiment configuration (CLI exit code 2)."""


class NumericalFailure(RuntimeError):
    """Non-finite values or a failed solve during a run (CLI exit code 3)."""


class GrowthFitError(RuntimeError):
    """The error history shows no dominant exponential growth."""


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExperimentConfig:
    """One run of one case.

    Parameters
    ----------
    case : {"periodic1d", "scatter2d", "spp2d"}
    scheme : {"rc2", "rc4"}
    n : int
        1D: number of grid points on ``[-pi, pi]`` (the last duplicates the
        first).  2D: intervals per unit length, so each subdomain has
        ``n x n_y`` cells.
    n_y : int, optional
        Intervals along ``y`` on ``[0, 1]``; defaults to ``n``.
    t_final : float, optional
        Defaults to 20 in 1D and to one temporal period ``2 pi / omega`` in 2D.
    cfl_fraction : float
        The time step is the largest ``T / m`` not exceeding
        ``cfl_fraction`` times the scheme's stable step.
    material : MaterialParams, optional
        The 1D medium, or the right (metal) side in 2D.  Defaults to the
        1D test medium or to scaled silver.
    left_material : MaterialParams
        Left side in 2D.
    ct : float
        Time scale for converting SI frequencies (2D defaults).
    omega : float, optional
        Scaled angular frequency (2D).  Defaults to the SI default over ``ct``.
    dt : float, optional
        Explicit time step; a warning is issued when it exceeds the bound.
    """

    case: str = "periodic1d"
    scheme: str = "rc2"
    n: int = 101
    n_y: int | None = None
    t_final: float | None = None
    cfl_fraction: float = 0.99
    material: MaterialParams | None = None
    left_material: MaterialParams = VACUUM
    k: float = PERIODIC_K
    theta_i: float = math.pi / 5
    omega: float | None = None
    amplitude: float = 1.0
    x_mid: float = 0.0
    ct: float = DEFAULT_CT_2D
    dt: float | None = None
    out: Path | None = None

    def __post_init__(self) -> None:
        if self.case not in CASES:
            raise ConfigError(f"case must be one of {CASES}, got {self.case!r}")
        if self.scheme not in SCHEMES:
            raise ConfigError(f"scheme must be one of {SCHEMES}, got {self.scheme!r}")
        if int(self.n) != self.n or self.n < 16:
            raise ConfigError("resolution must be an integer >= 16")
        if self.n_y is not None and (int(self.n_y) != self.n_y or self.n_y < 16):
            raise ConfigError("n_y must be an integer >= 16")
        if not 0 < self.cfl_fraction <= 1:
            raise ConfigError("cfl_fraction must lie in (0, 1]")
        if self.t_final is not None and not self.t_final > 0:
            raise ConfigError("t_final must be positive")
        if self.dt is not None and not self.dt > 0:
            raise ConfigError("dt must be positive")
        if self.omega is not None and not self.omega > 0:
            raise ConfigError("omega must be positive")
        if not self.ct > 0:
            raise ConfigError("ct must be positive")

    @property
    def order(self) -> int:
        return 2 if self.scheme == "rc2" else 4

    @property
    def medium(self) -> MaterialParams:
        if self.material is not None:
            return self.material
        if self.case == "periodic1d":
            return PERIODIC_MATERIAL
        return silver(ScalingConvention(self.ct))

    @property
    def frequency(self) -> float:
        if self.omega is not None:
            return self.omega
        if self.case == "periodic1d":
            raise ConfigError("the 1D case has no driving frequency")
        return DEFAULT_OMEGA_SI[self.case] / self.ct

    @property
    def final_time(self) -> float:
        if self.t_final is not None:
            return self.t_final
        if self.case == "periodic1d":
            return 20.0
        return 2 * math.pi / self.frequency


def load_config_file(path: str | Path) -> dict[str, str]:
    """Read a flat ``key = value`` file; ``#`` starts a comment."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


# ---------------------------------------------------------------------------
# time step
# ---------------------------------------------------------------------------


def stable_step(order: int, materials: Iterable[MaterialParams], h: Sequence[float]) -> float:
    """Largest stable step of the scheme over all materials."""
    fn = rc2_timestep if order == 2 else rc4_timestep
    return min(fn(m.c, m.omega_p, m.eps_r, m.gamma, h) for m in materials)


def choose_dt(cfg: ExperimentConfig, bound: float) -> tuple[float, int]:
    """``(dt, steps)`` with ``dt * steps == t_final``."""
    T = cfg.final_time
    if cfg.dt is not None:
        if cfg.dt > bound:
            warnings.warn(f"dt = {cfg.dt} exceeds the stability bound {bound}", RuntimeWarning, stacklevel=2)
        steps = max(1, round(T / cfg.dt))
        return T / steps, steps
    steps = math.ceil(T / (cfg.cfl_fraction * bound))
    dt = T / steps
    assert dt <= cfg.cfl_fraction * bound * (1 + 1e-12), "time step exceeds the stability bound"
    return dt, steps


# ---------------------------------------------------------------------------
# runs
# ---------------------------------------------------------------------------


@dataclass
class RunResult:
    """Outcome of one run.

    ``final_norms`` maps a field name (``"E"`` in 1D, ``"Ex"``/``"Ey"`` in
    2D) to its ``(L1, L2, Linf)`` error at ``t_final``.
    """

    config: ExperimentConfig
    h: float
    dt: float
    bound: float
    steps: int
    t: np.ndarray
    max_err: np.ndarray
    final_norms: dict[str, tuple[float, float, float]]
    snapshot: dict[str, np.ndarray] = field(repr=False)


def _check_finite(*arrays: np.ndarray) -> None:
    for a in arrays:
        if not np.all(np.isfinite(a)):
            raise NumericalFailure("non-finite field values detected")


def run_periodic_1d(cfg: ExperimentConfig) -> RunResult:
    """Plane wave in a periodic Drude medium on ``[-pi, pi]``.

    The max-norm error against ``Re(exact)`` is recorded after every step.
    """
    if cfg.case != "periodic1d":
        raise ConfigError("run_periodic_1d needs case='periodic1d'")
    m = cfg.medium
    wave = PlaneWave1D.from_dispersion(m, cfg.k, cfg.amplitude)
    g = StructuredGrid.uniform([-math.pi], [math.pi], [cfg.n - 1], cfg.order // 2, [True])
    bound = stable_step(cfg.order, [m], g.h)
    dt, steps = choose_dt(cfg, bound)
    hist = init_history(wave, g, 0.0, dt, cfg.order)
    scfg = SchemeConfig(cfg.order, m)
    nodes = slice(g.ghost, g.ghost + g.n[0])  # drop the duplicate end node
    x = g.axis_coords(0)[nodes]
    E0 = wave.fields((x,), 0.0)[0][0]
    t = np.empty(steps + 1)
    err = np.empty(steps + 1)
    t[0], err[0] = 0.0, float(np.abs(hist.E[0][0, nodes] - E0.real).max())
    for k in range(1, steps + 1):
        hist = step(hist, scfg, g, lambda E, _t: g.fill_periodic(E))
        ex = (E0 * wave.time_factor(hist.t)).real
        t[k] = k * dt
        err[k] = float(np.abs(hist.E[0][0, nodes] - ex).max())
    _check_finite(hist.E[0], err)
    ex = (E0 * wave.time_factor(hist.t)).real
    num = hist.E[0][0, nodes]
    result = RunResult(
        cfg,
        g.h[0],
        dt,
        bound,
        steps,
        t,
        err,
        {"E": norms(num - ex, (g.n[0],))},
        {"x": x, "E": num, "errE": num - ex},
    )
    _maybe_write(result)
    return result


def _exact_2d(cfg: ExperimentConfig):
    mats = (cfg.left_material, cfg.medium)
    if cfg.case == "scatter2d":
        return scattering_build(cfg.theta_i, cfg.frequency, cfg.amplitude, cfg.x_mid, mats)
    return spp_build(cfg.frequency, cfg.amplitude, cfg.x_mid, mats)


def build_two_domain(cfg: ExperimentConfig, exact, dt: float) -> TwoDomainProblem:
    order = cfg.order
    ny = cfg.n_y or cfg.n
    x0 = cfg.x_mid
    gl = StructuredGrid.uniform([x0 - 1, 0], [x0, 1], [cfg.n, ny], order // 2)
    gr = StructuredGrid.uniform([x0, 0], [x0 + 1, 1], [cfg.n, ny], order // 2)
    left = Subdomain(gl, cfg.left_material, init_history(exact, gl, 0.0, dt, order, side="left"))
    right = Subdomain(gr, cfg.medium, init_history(exact, gr, 0.0, dt, order, side="right"))
    return TwoDomainProblem(left, right, x0)


def _run_two_domain(cfg: ExperimentConfig) -> RunResult:
    exact = _exact_2d(cfg)
    ny = cfg.n_y or cfg.n
    h = (1.0 / cfg.n, 1.0 / ny)
    bound = stable_step(cfg.order, [cfg.left_material, cfg.medium], h)
    dt, steps = choose_dt(cfg, bound)
    prob = build_two_domain(cfg, exact, dt)
    subs = ((prob.left, "left", slice(None, -1)), (prob.right, "right", slice(None)))
    # nodal arrays of the whole domain: left nodes without the interface
    # column, then all right nodes
    coords, spatial = [], []
    for sub, side, cols in subs:
        X, Y = (a[sub.grid.interior][cols] for a in sub.grid.mesh())
        coords.append((X, Y))
        spatial.append(exact.fields((X, Y), 0.0, side=side)[0])
    X = np.concatenate([c[0] for c in coords])
    Y = np.concatenate([c[1] for c in coords])
    E0 = np.concatenate(spatial, axis=1)

    def numeric() -> np.ndarray:
        parts = [sub.history.E[0][(slice(None),) + sub.grid.interior][:, cols] for sub, _, cols in subs]
        return np.concatenate(parts, axis=1)

    def boundary(p, t_new, EL, ER):
        fill_outer_boundary(p, exact, t_new, EL, ER)

    t = np.empty(steps + 1)
    err = np.empty(steps + 1)
    t[0] = 0.0
    err[0] = float(np.abs(numeric() - E0.real).max())
    for k in range(1, steps + 1):
        prob.step(boundary)
        t[k] = k * dt
        e = np.abs(numeric() - (E0 * exact.time_factor(prob.t)).real).max()
        if not np.isfinite(e):
            raise NumericalFailure(f"non-finite field values at step {k}")
        err[k] = float(e)
    num = numeric()
    ex = (E0 * exact.time_factor(prob.t)).real
    diff = num - ex
    result = RunResult(
        cfg,
        h[0],
        dt,
        bound,
        steps,
        t,
        err,
        {"Ex": norms(diff[0]), "Ey": norms(diff[1])},
        {"x": X, "y": Y, "Ex": num[0], "Ey": num[1], "errEx": diff[0], "errEy": diff[1]},
    )
    _maybe_write(result)
    return result


def run_scatter2d(cfg: ExperimentConfig) -> RunResult:
    """Plane wave hitting the interface from the left; exact outer data."""
    if cfg.case != "scatter2d":
        raise ConfigError("run_scatter2d needs case='scatter2d'")
    return _run_two_domain(cfg)


def run_spp2d(cfg: ExperimentConfig) -> RunResult:
    """Surface plasmon polariton along the interface; exact outer data."""
    if cfg.case != "spp2d":
        raise ConfigError("run_spp2d needs case='spp2d'")
    return _run_two_domain(cfg)


def run(cfg: ExperimentConfig) -> RunResult:
    return {"periodic1d": run_periodic_1d, "scatter2d": run_scatter2d, "spp2d": run_spp2d}[cfg.case](cfg)


# ---------------------------------------------------------------------------
# convergence
# ---------------------------------------------------------------------------

NORMS = ("L1", "L2", "Linf")


@dataclass(frozen=True)
class ConvergenceRow:
    N: int
    h: float
    dt: float
    field: str
    norm: str
    err: float
    rate: float


@dataclass
class ConvergenceReport:
    """Errors per resolution, field and norm with successive log2 rates."""

    rows: list[ConvergenceRow]

    @classmethod
    def from_results(cls, results: Sequence[RunResult]) -> "ConvergenceReport":
        rows = []
        fields = list(results[0].final_norms)
        for fname in fields:
            for ni, nname in enumerate(NORMS):
                prev = None
                for r in results:
                    e = r.final_norms[fname][ni]
                    rate = math.nan if prev is None else convergence_rate(prev, e)
                    rows.append(ConvergenceRow(r.config.n, r.h, r.dt, fname, nname, e, rate))
                    prev = e
        return cls(rows)

    def rates(self, field: str, norm: str) -> np.ndarray:
        return np.array([r.rate for r in self.rows if r.field == field and r.norm == norm][1:])

    def errors(self, field: str, norm: str) -> np.ndarray:
        return np.array([r.err for r in self.rows if r.field == field and r.norm == norm])

    @property
    def fields(self) -> list[str]:
        return list(dict.fromkeys(r.field for r in self.rows))

    def min_rate(self, norms_: Sequence[str] = NORMS) -> float:
        return float(min(self.rates(f, n).min() for f in self.fields for n in norms_))


def convergence_rate(err_coarse: float, err_fine: float) -> float:
    """``log2`` of the error ratio under ``h -> h/2``."""
    if err_fine <= 0 or err_coarse <= 0:
        return math.nan
    return math.log2(err_coarse / err_fine)


def convergence_study(cfg: ExperimentConfig, n_list: Sequence[int]) -> ConvergenceReport:
    """Run ``cfg`` at every resolution in ``n_list`` to the same final time."""
    if len(n_list) < 3:
        raise ConfigError("a convergence study needs at least three resolutions")
    results = [run(replace(cfg, n=int(n), n_y=None, out=None)) for n in n_list]
    report = ConvergenceReport.from_results(results)
    if cfg.out is not None:
        write_convergence_csv(Path(cfg.out) / "convergence.csv", report)
    return report


# ---------------------------------------------------------------------------
# spurious growth
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GrowthFit:
    """Least-squares exponential fit of the error tail.

    ``rate`` is per unit time; ``theory`` is ``gamma^3 dt^2 / 12``.
    """

    rate: float
    intercept: float
    theory: float
    dt: float
    window: tuple[float, float]


def fit_growth(t: np.ndarray, err: np.ndarray, dt: float, gamma: float, chunks: int = 8) -> GrowthFit:
    """Fit ``log(err) = a + rate t`` on the final third of the history.

    Raises
    ------
    GrowthFitError
        If the log error in the window is not increasing chunk by chunk.
    """
    t = np.asarray(t, dtype=float)
    err = np.asarray(err, dtype=float)
    sel = t >= t[-1] * 2 / 3
    tw, ew = t[sel], err[sel]
    if tw.size < 2 * chunks or np.any(ew <= 0):
        raise GrowthFitError("fit window too short or contains zero errors")
    logs = np.log(ew)
    means = np.array([c.mean() for c in np.array_split(logs, chunks)])
    if not np.all(np.diff(means) > 0):
        raise GrowthFitError("the error does not grow monotonically over the fit window")
    rate, intercept = np.polyfit(tw, logs, 1)
    return GrowthFit(float(rate), float(intercept), gamma**3 * dt**2 / 12, dt, (float(tw[0]), float(tw[-1])))


def growth_study(cfg: ExperimentConfig) -> GrowthFit:
    """Run the periodic case and fit the exponential error tail."""
    if cfg.case != "periodic1d":
        raise ConfigError("growth studies use the periodic1d case")
    res = run_periodic_1d(cfg)
    return fit_growth(res.t, res.max_err, res.dt, cfg.medium.gamma)


# ---------------------------------------------------------------------------
# stability report
# ---------------------------------------------------------------------------


@dataclass
class StabilityReport:
    """Chosen time step, candidate constraints and an amplification scan.

    ``constraints`` maps ``"<name>[<material index>]"`` to the step it
    allows; ``binding`` names the smallest.
    """

    dt: float
    binding: str
    constraints: dict[str, float]
    scan: list[tuple[float, float, float, float, float, str]]


def _constraints(order: int, m: MaterialParams, h: Sequence[float]) -> dict[str, float]:
    a = m.c * math.sqrt(sum(1 / hd**2 for hd in h))
    out: dict[str, float] = {}
    if order == 2:
        w = m.plasma_ratio
        out["cfl"] = 2 / (a + math.sqrt(a * a + w))
        if m.gamma > 0:
            out["gamma cap"] = 0.5 / m.gamma
    else:
        out["cfl quartic"] = rc4_quartic_step(m.c, m.omega_p, m.eps_r, h)
        if m.omega_p > 0:
            out["omega cap"] = 2 * math.sqrt(m.eps_r) / m.omega_p * (1 - 1e-9)
        if m.gamma > 0:
            out["gamma cap"] = 0.68 / m.gamma
    return out


def amplification_scan(scheme: str, n: int = 15, n_xi: int = 64) -> list[tuple]:
    """Largest amplification over ``n_xi`` wavenumbers in ``[0, pi]`` on an ``n^3`` grid.

    The grid covers each scheme's sufficient stability region in
    ``(Lambda, Omega, Gamma)``; triples outside it are skipped.  Rows are
    ``(Lambda, Omega, Gamma, xi, absA_max, class)`` where ``xi`` is the
    maximizing wavenumber.  RC2 reports the classes ``A0`` and ``A+-``
    separately; RC4 reports ``nontrivial``.
    """
    # the spectra are even in xi, so [0, pi] covers every mode and always
    # includes xi = 0, where A0 is largest
    xi = np.linspace(0.0, np.pi, n_xi)
    if scheme == "rc2":
        L, O, G = np.linspace(0, 1, n), np.linspace(0, 2, n), np.linspace(0, 0.5, n)
    else:
        L, O, G = np.linspace(0, 1, n), np.linspace(0, 2, n, endpoint=False), np.linspace(0, 0.68, n)
    LL, OO, GG = (a.ravel() for a in np.meshgrid(L, O, G, indexing="ij"))
    keep = (LL + OO**2 / 4 <= 1) & (GG <= 0.5) if scheme == "rc2" else rc4_admissible(LL, OO, GG)
    LL, OO, GG = LL[keep], OO[keep], GG[keep]
    m = len(LL)
    Lr, Or, Gr = (np.repeat(a, n_xi) for a in (LL, OO, GG))
    X = np.tile(xi, m)
    rows = []
    if scheme == "rc2":
        roots, a0 = rc2_roots_from_params(4 * Lr**2 * np.sin(X / 2) ** 2, Or, Gr)
        mags = np.abs(roots)
        idx = np.arange(len(a0))
        m0 = mags[idx, a0].reshape(m, n_xi)
        mags[idx, a0] = -np.inf
        mpm = mags.max(axis=1).reshape(m, n_xi)
        classes = (("A0", m0), ("A+-", mpm))
    else:
        c = np.cos(X)
        r2 = -4 * Lr**2 * np.sin(X / 2) ** 2
        r4 = Lr**2 * (-7 / 3 + 8 / 3 * c - c**2 / 3)
        mags = np.abs(rc4_roots_from_params(r2, r4, Or, Gr)).max(axis=1).reshape(m, n_xi)
        classes = (("nontrivial", mags),)
    for i in range(m):
        for name, arr in classes:
            j = int(np.argmax(arr[i]))
            rows.append((float(LL[i]), float(OO[i]), float(GG[i]), float(xi[j]), float(arr[i, j]), name))
    return rows


def stability_report(
    materials: Sequence[MaterialParams], h: Sequence[float], scheme: str, n: int = 15, n_xi: int = 64
) -> StabilityReport:
    """Time step for ``materials`` on spacing ``h`` plus an amplification scan."""
    if scheme not in SCHEMES:
        raise ConfigError(f"scheme must be one of {SCHEMES}")
    order = 2 if scheme == "rc2" else 4
    cons = {}
    for i, m in enumerate(materials):
        for name, v in _constraints(order, m, h).items():
            cons[f"{name}[{i}]"] = float(v)
    binding = min(cons, key=cons.get)
    dt = stable_step(order, materials, h)
    return StabilityReport(dt, binding, cons, amplification_scan(scheme, n, n_xi))


# ---------------------------------------------------------------------------
# CSV output
# ---------------------------------------------------------------------------

HISTORY_COLUMNS = ("t", "max_err")
CONVERGENCE_COLUMNS = ("N", "h", "dt", "field", "norm", "err", "rate")
SCAN_COLUMNS = ("Lambda", "Omega", "Gamma", "xi", "absA_max", "class")
SNAPSHOT_COLUMNS = ("x", "y", "Ex", "Ey", "errEx", "errEy")
SNAPSHOT1D_COLUMNS = ("x", "E", "errE")


def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _write(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])
    return path


def write_history_csv(path, t, err) -> Path:
    return _write(path, HISTORY_COLUMNS, zip(t, err))


def write_snapshot_csv(path, snapshot: dict[str, np.ndarray]) -> Path:
    cols = SNAPSHOT_COLUMNS if "y" in snapshot else SNAPSHOT1D_COLUMNS
    data = [np.ravel(snapshot[c]) for c in cols]
    return _write(path, cols, zip(*data))


def write_convergence_csv(path, report: ConvergenceReport) -> Path:
    rows = ((r.N, r.h, r.dt, r.field, r.norm, r.err, r.rate) for r in report.rows)
    return _write(path, CONVERGENCE_COLUMNS, rows)


def write_scan_csv(path, rows) -> Path:
    return _write(path, SCAN_COLUMNS, rows)


def read_csv(path) -> tuple[list[str], list[list[str]]]:
    with Path(path).open(newline="") as fh:
        r = list(csv.reader(fh))
    if not r:
        return [], []
    return r[0], r[1:]


def rates_from_csv(path) -> dict[tuple[str, str], np.ndarray]:
    """Recompute successive rates from a convergence CSV's error column."""
    header, rows = read_csv(path)
    if tuple(header) != CONVERGENCE_COLUMNS:
        raise ValueError("not a convergence CSV")
    series: dict[tuple[str, str], list[float]] = {}
    for row in rows:
        series.setdefault((row[3], row[4]), []).append(float(row[5]))
    return {k: np.log2(np.array(v[:-1]) / np.array(v[1:])) for k, v in series.items()}


def _maybe_write(res: RunResult) -> None:
    if res.config.out is None:
        return
    out = Path(res.config.out)
    tag = f"{res.config.case}_{res.config.scheme}_N{res.config.n}"
    write_history_csv(out / f"{tag}_history.csv", res.t, res.max_err)
    write_snapshot_csv(out / f"{tag}_snapshot.csv", res.snapshot)
