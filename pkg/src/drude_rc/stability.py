"""Von Neumann analysis of the RC2 and RC4 schemes and time-step selection.

A Fourier mode ``exp(i k.x) A^n`` is inserted into each scheme.  The
amplification factors ``A`` depend on the grid wavenumbers ``xi_d = k_d h_d``
and on the dimensionless triple

    lambda_d = c dt / h_d,   Omega = dt omega_p / sqrt(eps_r),   Gamma = dt gamma.

RC2 leads to a monic cubic in ``A``; RC4 leads to a 3x3 polynomial matrix
whose determinant has degree ten with four trivial roots at zero.

Root finding works on one-step transition matrices (RC4) or on a deflated
cubic (RC2).  When the field and history equations decouple (``Omega = 0``,
or ``Gamma = 0`` for RC4) the factorization is used directly.  This keeps
double roots on the unit circle at ``|A| = 1`` instead of smearing them by
``sqrt(machine eps)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.optimize import brentq

_EPS = np.finfo(float).eps

# Weights of the RC4 recursions (see stepper.quadrature_weights_rc4).
_PSI_W = (23 / 24, -11 / 24, 5 / 24, -1 / 24)
_PHI_W = (2 / 3, -7 / 24, 1 / 6, -1 / 24)


@dataclass(frozen=True)
class DimensionlessTriple:
    """Per-axis Courant numbers plus the scaled plasma and damping rates."""

    lambdas: tuple[float, ...]
    omega: float
    gamma: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "lambdas", tuple(float(v) for v in np.atleast_1d(self.lambdas)))
        if min(self.lambdas) < 0 or self.omega < 0 or self.gamma < 0:
            raise ValueError("dimensionless parameters must be nonnegative")

    @property
    def Lambda(self) -> float:
        return float(np.sqrt(np.sum(np.square(self.lambdas))))

    @property
    def dims(self) -> int:
        return len(self.lambdas)

    @classmethod
    def from_physical(
        cls, c: float, omega_p: float, eps_r: float, gamma: float, h: Sequence[float], dt: float
    ) -> "DimensionlessTriple":
        return cls(tuple(c * dt / hd for hd in h), dt * omega_p / np.sqrt(eps_r), dt * gamma)


@dataclass(frozen=True)
class GridWavenumber:
    """Grid wavenumbers ``xi_d`` in ``[-pi, pi]``."""

    xi: tuple[float, ...]

    def __post_init__(self) -> None:
        xi = tuple(float(v) for v in np.atleast_1d(self.xi))
        if any(abs(v) > np.pi + 1e-12 for v in xi):
            raise ValueError("grid wavenumbers must lie in [-pi, pi]")
        object.__setattr__(self, "xi", xi)


@dataclass(frozen=True)
class AmplificationSpectrum:
    """Amplification factors of one Fourier mode.

    ``tags`` labels each root: ``"A0"`` or ``"A+-"`` for RC2, ``"nontrivial"``
    for RC4.
    """

    roots: np.ndarray
    tags: tuple[str, ...]

    @property
    def a0(self) -> complex | None:
        for r, t in zip(self.roots, self.tags):
            if t == "A0":
                return complex(r)
        return None

    @property
    def max_abs(self) -> float:
        return float(np.max(np.abs(self.roots)))


# ---------------------------------------------------------------------------
# symbols
# ---------------------------------------------------------------------------


def _as_xi(xi) -> np.ndarray:
    if isinstance(xi, GridWavenumber):
        return np.asarray(xi.xi)
    return np.asarray(xi, dtype=float)


def rc2_symbol(lambdas: Sequence[float], xi) -> np.ndarray:
    """``S = sum_d 4 lambda_d^2 sin^2(xi_d / 2)`` (last axis of ``xi`` runs over d)."""
    lam = np.asarray(lambdas, dtype=float)
    return np.sum(4 * lam**2 * np.sin(_as_xi(xi) / 2) ** 2, axis=-1)


def rho_2h(lambdas: Sequence[float], xi) -> np.ndarray:
    """Scaled symbol of ``dt^2 c^2 Delta_2h``: ``sum lambda^2 (-4 sin^2(xi/2))``."""
    return -rc2_symbol(lambdas, xi)


def rho_4h(lambdas: Sequence[float], xi) -> np.ndarray:
    """Scaled symbol of ``dt^2 c^2 Delta_4h``."""
    lam = np.asarray(lambdas, dtype=float)
    cx = np.cos(_as_xi(xi))
    return np.sum(lam**2 * (-7 / 3 + 8 / 3 * cx - 1 / 3 * cx**2), axis=-1)


# ---------------------------------------------------------------------------
# shared root helpers
# ---------------------------------------------------------------------------


def _quadratic_roots(q1, q0) -> tuple[np.ndarray, np.ndarray]:
    """Roots of ``A^2 + q1 A + q0`` (real arrays), robust near double roots."""
    q1 = np.asarray(q1, dtype=float)
    q0 = np.asarray(q0, dtype=float)
    disc = q1 * q1 - 4 * q0
    tol = 16 * _EPS * np.maximum(q1 * q1, 4 * np.abs(q0))
    double = np.abs(disc) <= tol
    neg = (disc < 0) & ~double
    pos = (disc > 0) & ~double
    r1 = np.empty(q1.shape, dtype=complex)
    r2 = np.empty(q1.shape, dtype=complex)
    r1[double] = r2[double] = -q1[double] / 2
    sq = np.sqrt(-disc[neg]) / 2
    r1[neg] = -q1[neg] / 2 + 1j * sq
    r2[neg] = -q1[neg] / 2 - 1j * sq
    big = -(q1[pos] + np.copysign(np.sqrt(disc[pos]), q1[pos])) / 2
    r1[pos] = big
    with np.errstate(divide="ignore", invalid="ignore"):
        r2[pos] = np.where(big != 0, q0[pos] / big, 0.0)
    return r1, r2


def _companion(coeffs: np.ndarray) -> np.ndarray:
    """Batched companion matrices for monic polynomials (highest degree first)."""
    coeffs = np.atleast_2d(coeffs)
    m, deg = coeffs.shape[0], coeffs.shape[1] - 1
    C = np.zeros((m, deg, deg), dtype=coeffs.dtype)
    C[:, 0, :] = -coeffs[:, 1:] / coeffs[:, :1]
    idx = np.arange(deg - 1)
    C[:, idx + 1, idx] = 1
    return C


# ---------------------------------------------------------------------------
# RC2
# ---------------------------------------------------------------------------


def _rc2_coeffs(S, Om, G):
    e = np.exp(-G)
    O2 = Om * Om
    b2 = S + O2 - e - 2 - 0.5 * O2 * G
    b1 = -S * e - O2 * e + 2 * e + 1 - 0.5 * O2 * G * e
    b0 = -e * np.ones_like(b2)
    return b2, b1, b0


def rc2_char_coeffs(p: DimensionlessTriple, xi) -> tuple[float, float, float]:
    """Coefficients ``(b2, b1, b0)`` of ``A^3 + b2 A^2 + b1 A + b0``.

    Examples
    --------
    >>> rc2_char_coeffs(DimensionlessTriple((0.7,), 0.0, 0.0), (0.0,))
    (-3.0, 3.0, -1.0)
    """
    S = rc2_symbol(p.lambdas, xi)
    b2, b1, b0 = _rc2_coeffs(S, p.omega, p.gamma)
    return float(b2), float(b1), float(b0)


def _rc2_roots_batch(b2, b1, b0) -> tuple[np.ndarray, np.ndarray]:
    """Roots of monic real cubics plus the index of the A0 root.

    The real root with the largest real part is polished by Newton's method
    and deflated; the remaining quadratic is solved in closed form.
    """
    b2, b1, b0 = (np.atleast_1d(np.asarray(v, dtype=float)) for v in (b2, b1, b0))
    coeffs = np.stack([np.ones_like(b2), b2, b1, b0], axis=-1)
    eig = np.linalg.eigvals(_companion(coeffs))
    realmask = eig.imag == 0
    if not np.all(realmask.any(axis=1)):
        # fall back to the root closest to the real axis
        k = np.argmin(np.abs(eig.imag), axis=1)
        realmask[np.arange(len(k)), k] = True
    cand = np.where(realmask, eig.real, -np.inf)
    r = cand.max(axis=1)
    for _ in range(3):
        f = ((r + b2) * r + b1) * r + b0
        df = (3 * r + 2 * b2) * r + b1
        step = np.where(df != 0, f / np.where(df != 0, df, 1), 0)
        r = r - step
    q1 = b2 + r
    q0 = b1 + r * q1
    r1, r2 = _quadratic_roots(q1, q0)
    roots = np.stack([r.astype(complex), r1, r2], axis=-1)
    return roots, _tag_a0(roots)


def _tag_a0(roots: np.ndarray) -> np.ndarray:
    key = np.where(roots.imag == 0, roots.real, -np.inf)
    return np.argmax(key, axis=1)


def _rc2_factored_batch(S, G) -> tuple[np.ndarray, np.ndarray]:
    """Exact factorization ``(A - e^{-G})(A^2 + (S - 2)A + 1)``.

    Valid for ``Omega = 0``, and for ``Gamma = 0`` with ``S`` replaced by
    ``S + Omega^2``.
    """
    S = np.atleast_1d(np.asarray(S, dtype=float))
    G = np.broadcast_to(G, S.shape)
    r1, r2 = _quadratic_roots(S - 2, np.ones_like(S))
    roots = np.stack([np.exp(-G).astype(complex), r1, r2], axis=-1)
    return roots, _tag_a0(roots)


def rc2_roots_from_params(S, Om, G) -> tuple[np.ndarray, np.ndarray]:
    """Batched RC2 roots for arrays of ``S`` and scalar or array ``Om``, ``G``.

    Returns the roots, shape ``(M, 3)``, and the column index of ``A0``.
    """
    S = np.atleast_1d(np.asarray(S, dtype=float))
    Om = np.broadcast_to(np.asarray(Om, dtype=float), S.shape)
    G = np.broadcast_to(np.asarray(G, dtype=float), S.shape)
    roots = np.empty(S.shape + (3,), dtype=complex)
    a0 = np.empty(S.shape, dtype=int)
    # The field and history equations couple only through Omega^2 Gamma.  Below
    # 1e-32 that coupling moves no root by more than 1e-16, even a defective
    # one, and the factored form is then exact to rounding.
    coupling = Om * Om * G
    zero = (Om * Om == 0) | (coupling < 1e-32)
    if zero.any():
        s_eff = S[zero] + np.where(Om[zero] * Om[zero] == 0, 0.0, Om[zero] ** 2)
        roots[zero], a0[zero] = _rc2_factored_batch(s_eff, G[zero])
    if (~zero).any():
        roots[~zero], a0[~zero] = _rc2_transition_roots(S[~zero], Om[~zero], G[~zero])
    return roots, a0


def _tag_a0_nearest_real(roots: np.ndarray) -> np.ndarray:
    real = roots.imag == 0
    none = ~real.any(axis=1)
    if none.any():
        k = np.argmin(np.abs(roots[none].imag), axis=1)
        real[np.flatnonzero(none), k] = True
    return np.argmax(np.where(real, roots.real, -np.inf), axis=1)


def _rc2_transition_roots(S, Om, G) -> tuple[np.ndarray, np.ndarray]:
    """RC2 roots as eigenvalues of a well-scaled one-step matrix (``Omega > 0``).

    The state is ``(E^n, (E^n - E^{n-1})/s, psi^n/dt)`` with
    ``s = sqrt(S + Omega^2)``.  Near ``A = 1`` the cubic has a nearly
    defective root whose computed value from the polynomial coefficients is
    only accurate to ``sqrt(eps)``; in this basis the entries stay of
    comparable size and the eigenvalues are accurate to a few ``eps``.
    """
    e = np.exp(-G)
    O2 = Om * Om
    s = np.sqrt(S + O2)
    c = O2 * G
    T = np.zeros(S.shape + (3, 3))
    T[:, 0, 0] = 1 - s * s
    T[:, 0, 1] = s
    T[:, 0, 2] = c
    T[:, 1, 0] = -s
    T[:, 1, 1] = 1
    T[:, 1, 2] = c / s
    T[:, 2, 0] = 0.5 * (1 - s * s) + 0.5 * e
    T[:, 2, 1] = 0.5 * s
    T[:, 2, 2] = 0.5 * c + e
    roots = np.linalg.eigvals(T)
    return roots, _tag_a0_nearest_real(roots)


def rc2_roots(coeffs: Sequence[float]) -> AmplificationSpectrum:
    """Amplification factors of the RC2 cubic with the ``A0`` root tagged.

    ``A0`` is the real root with the largest real part.  The other two
    roots are the pair ``A+-``.

    Raises
    ------
    ValueError
        If no real root can be identified.
    """
    b2, b1, b0 = (float(c) for c in coeffs)
    roots, a0 = _rc2_roots_batch(b2, b1, b0)
    roots, k = roots[0], int(a0[0])
    if roots[k].imag != 0:
        raise ValueError("could not identify a real A0 root")
    tags = tuple("A0" if i == k else "A+-" for i in range(3))
    return AmplificationSpectrum(roots, tags)


def rc2_spectrum(p: DimensionlessTriple, xi) -> AmplificationSpectrum:
    """RC2 spectrum for one parameter triple and wavenumber.

    Uses the exact factorization when ``Omega = 0``.
    """
    S = rc2_symbol(p.lambdas, xi)
    roots, a0 = rc2_roots_from_params(S, p.omega, p.gamma)
    k = int(a0[0])
    return AmplificationSpectrum(roots[0], tuple("A0" if i == k else "A+-" for i in range(3)))


def rc2_closed_form_roots(coeffs: Sequence[float]) -> np.ndarray:
    """Cardano's formula with principal-branch radicals (cross-check only)."""
    b2, b1, b0 = (complex(c) for c in coeffs)
    p = b1 - b2**2 / 3
    q = 2 * b2**3 / 27 - b2 * b1 / 3 + b0
    d = np.sqrt(q**2 / 4 + p**3 / 27 + 0j)
    u = (-q / 2 + d) ** (1 / 3)
    if abs(u) < 1e-300:
        u = (-q / 2 - d) ** (1 / 3)
    w = np.exp(2j * np.pi / 3)
    out = []
    for k in range(3):
        uk = u * w**k
        vk = -p / (3 * uk) if uk != 0 else 0
        out.append(uk + vk - b2 / 3)
    return np.array(out)


class Rc2MaxAmp(NamedTuple):
    a0: float
    apm: float


def _xi_grid(dims: int, n: int) -> np.ndarray:
    axis = np.linspace(-np.pi, np.pi, n)
    mesh = np.meshgrid(*([axis] * dims), indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


def rc2_max_amp(p: DimensionlessTriple, n: int = 65) -> Rc2MaxAmp:
    """Largest ``|A0|`` and ``|A+-|`` over an ``n``-point-per-axis wavenumber grid."""
    if n < 3:
        raise ValueError("need at least 3 samples per axis")
    S = rc2_symbol(p.lambdas, _xi_grid(p.dims, n))
    roots, a0 = rc2_roots_from_params(S, p.omega, p.gamma)
    mags = np.abs(roots)
    rows = np.arange(len(a0))
    m0 = mags[rows, a0]
    mags[rows, a0] = -np.inf
    return Rc2MaxAmp(float(m0.max()), float(mags.max()))


def rc2_timestep(
    c: float, omega_p: float, eps_r: float, gamma: float, h: Sequence[float], safety: float = 1.0
) -> float:
    """Practical stable time step of the RC2 scheme.

    ``dt = safety * min(dt_m, 0.5 / gamma)`` where ``dt_m`` is the positive
    root of ``(omega_p^2 / (4 eps_r)) dt^2 + c dt sqrt(sum 1/h^2) - 1 = 0``.
    """
    if not 0 < safety <= 1:
        raise ValueError("safety must lie in (0, 1]")
    if min(h) <= 0:
        raise ValueError("grid spacings must be positive")
    a = c * np.sqrt(np.sum(1.0 / np.square(h)))
    w = omega_p**2 / eps_r
    dt_m = 2.0 / (a + np.sqrt(a * a + w))
    cap = 0.5 / gamma if gamma > 0 else np.inf
    return float(safety * min(dt_m, cap))


# ---------------------------------------------------------------------------
# RC4
# ---------------------------------------------------------------------------


def _rc4_entries(r2, r4, Om, G):
    """Ascending-power coefficient lists of the nine matrix entries."""
    e = np.exp(-G)
    O2 = Om * Om
    O4 = O2 * O2
    mee = [-1.0, 2 + r4 - O2 + (r2 * r2 - 2 * r2 * O2 + O4) / 12, -1.0]
    mep = [0.0, O2 + (2 * O2 * r2 - 2 * O4) / 12]
    mef = [0.0, O4 / 12]
    mpe = [e * G * _PSI_W[3] * e**3, e * G * _PSI_W[2] * e**2, e * G * _PSI_W[1] * e, e * G * _PSI_W[0], G / 3]
    mpp = [0.0, 0.0, 0.0, e, -1.0]
    mpf = [0.0]
    mfe = [G * G * _PHI_W[3] * e**4, G * G * _PHI_W[2] * e**3, G * G * _PHI_W[1] * e**2, G * G * _PHI_W[0] * e, 0.0]
    mfp = [0.0, 0.0, 0.0, G * e]
    mff = [0.0, 0.0, 0.0, e, -1.0]
    return [[mee, mep, mef], [mpe, mpp, mpf], [mfe, mfp, mff]]


def rc4_matrix(p: DimensionlessTriple, xi, A: complex) -> np.ndarray:
    """Numeric 3x3 matrix ``M(A)`` of the RC4 Fourier system."""
    r2 = float(rho_2h(p.lambdas, xi))
    r4 = float(rho_4h(p.lambdas, xi))
    ent = _rc4_entries(r2, r4, p.omega, p.gamma)
    return np.array([[P.polyval(A, np.asarray(c, dtype=float)) for c in row] for row in ent])


def rc4_det_poly(p: DimensionlessTriple, xi) -> np.ndarray:
    """Coefficients of ``det M(A)``, highest degree first (length 11)."""
    r2 = float(rho_2h(p.lambdas, xi))
    r4 = float(rho_4h(p.lambdas, xi))
    (a, b, c), (d, e, f), (g, h, i) = [[np.asarray(x, dtype=float) for x in row] for row in _rc4_entries(r2, r4, p.omega, p.gamma)]
    m = P.polymul
    det = P.polysub(m(e, i), m(f, h))
    det = m(a, det)
    det = P.polysub(det, m(b, P.polysub(m(d, i), m(f, g))))
    det = P.polyadd(det, m(c, P.polysub(m(d, h), m(e, g))))
    out = np.zeros(11, dtype=complex)
    out[: len(det)] = det
    return out[::-1]


def _rc4_transition_batch(r2, r4, Om, G) -> np.ndarray:
    """One-step matrices for the state ``(E^n, E^{n-1}, E^{n-2}, E^{n-3}, Psi^n, Phi^n)``."""
    m = r2.shape[0]
    e = np.exp(-G)
    O2 = Om * Om
    O4 = O2 * O2
    a = 2 + r4 - O2 + (r2 - O2) ** 2 / 12
    bpsi = O2 + (O2 * r2 - O4) / 6
    bphi = O4 / 12
    T = np.zeros((m, 6, 6))
    T[:, 0, 0] = a
    T[:, 0, 1] = -1
    T[:, 0, 4] = bpsi
    T[:, 0, 5] = bphi
    T[:, 1, 0] = T[:, 2, 1] = T[:, 3, 2] = 1
    for j in range(4):
        T[:, 4, j] = e * G * _PSI_W[j] * e**j
        T[:, 5, j] = G * G * _PHI_W[j] * e ** (j + 1)
    T[:, 4, 4] = e
    T[:, 4, :] += (G / 3)[:, None] * T[:, 0, :]
    T[:, 5, 4] = G * e
    T[:, 5, 5] = e
    return T


def rc4_roots_from_params(r2, r4, Om, G) -> np.ndarray:
    """Six nontrivial RC4 amplification factors per row, shape ``(M, 6)``."""
    r2 = np.atleast_1d(np.asarray(r2, dtype=float))
    r4 = np.broadcast_to(np.asarray(r4, dtype=float), r2.shape)
    Om = np.broadcast_to(np.asarray(Om, dtype=float), r2.shape)
    G = np.broadcast_to(np.asarray(G, dtype=float), r2.shape)
    roots = np.zeros(r2.shape + (6,), dtype=complex)
    # as for RC2, a coupling Omega^2 Gamma below 1e-32 cannot move any root
    split = (Om * Om == 0) | (G == 0) | (Om * Om * G < 1e-32)
    if split.any():
        # field equation decouples from the history: E-block quadratic plus
        # the history eigenvalues e^{-G} (twice) and two zeros
        o2 = Om[split] ** 2
        rr2 = r2[split]
        a = 2 + r4[split] - o2 + (rr2 - o2) ** 2 / 12
        q1, q2 = _quadratic_roots(-a, np.ones_like(a))
        roots[split, 0] = q1
        roots[split, 1] = q2
        roots[split, 2] = roots[split, 3] = np.exp(-G[split])
    if (~split).any():
        T = _rc4_transition_batch(r2[~split], r4[~split], Om[~split], G[~split])
        roots[~split] = np.linalg.eigvals(_rc4_rescale(T, r2[~split], r4[~split], Om[~split]))
    return roots


def _rc4_rescale(T, r2, r4, Om) -> np.ndarray:
    """Similar matrix in the state ``(E^n, (E^n - E^{n-1})/s, E^{n-2}, ...)``.

    ``s^2 = |2 - a|`` with ``a`` the ``E^n`` coefficient of the field update.
    As for RC2 this keeps the near-defective pair at ``A = 1`` well
    conditioned when ``Lambda`` and ``Omega`` are both small.  Rows with
    ``s = 0`` are returned unchanged.
    """
    O2 = Om * Om
    two_minus_a = -r4 + O2 - (r2 - O2) ** 2 / 12
    s = np.sqrt(np.abs(two_minus_a))
    ok = s > 0
    out = T.copy()
    if not ok.any():
        return out
    Tk, sk, d = T[ok], s[ok], two_minus_a[ok]
    # T P with E^{n-1} = y0 - s y1
    TP = Tk.copy()
    TP[:, :, 0] = Tk[:, :, 0] + Tk[:, :, 1]
    TP[:, :, 1] = -sk[:, None] * Tk[:, :, 1]
    R = TP.copy()
    # row of y1' = (E^{n+1} - E^n)/s; rows 0 and 1 of T are the field update and the shift
    R[:, 1, :] = TP[:, 0, :] / sk[:, None]
    R[:, 1, 0] = -d / sk
    R[:, 1, 1] = 1.0
    out[ok] = R
    return out


def rc4_spectrum(p: DimensionlessTriple, xi) -> AmplificationSpectrum:
    r2 = rho_2h(p.lambdas, xi)
    r4 = rho_4h(p.lambdas, xi)
    roots = rc4_roots_from_params(r2, r4, p.omega, p.gamma)[0]
    return AmplificationSpectrum(roots, ("nontrivial",) * 6)


class Rc4MaxAmp(NamedTuple):
    max_abs: float
    xi: tuple[float, ...]


def rc4_max_amp(p: DimensionlessTriple, n: int = 65) -> Rc4MaxAmp:
    """Largest nontrivial ``|A|`` over an ``n``-point-per-axis grid and its location."""
    if n < 3:
        raise ValueError("need at least 3 samples per axis")
    xi = _xi_grid(p.dims, n)
    roots = rc4_roots_from_params(rho_2h(p.lambdas, xi), rho_4h(p.lambdas, xi), p.omega, p.gamma)
    mags = np.abs(roots).max(axis=1)
    k = int(np.argmax(mags))
    return Rc4MaxAmp(float(mags[k]), tuple(float(v) for v in xi[k]))


def rc4_bound_residual(Lambda, Omega):
    """``(4/5) Omega^4 + 16 Lambda^2 - (72/5) Omega^2 - 64 Lambda + 48``."""
    return 0.8 * Omega**4 + 16 * Lambda**2 - 14.4 * Omega**2 - 64 * Lambda + 48


def rc4_admissible(Lambda, Omega, Gamma):
    """Boolean mask of triples inside the RC4 sufficient stability region."""
    return (rc4_bound_residual(Lambda, Omega) >= 0) & (np.abs(Omega) < 2) & (Gamma <= 0.68)


def rc4_quartic_step(c: float, omega_p: float, eps_r: float, h: Sequence[float]) -> float:
    """First positive ``dt`` at which the RC4 bound quartic reaches zero.

    Returns ``inf`` when the quartic stays positive up to ``dt = 1/a`` with
    ``a = c sqrt(sum 1/h^2)``.
    """
    if min(h) <= 0:
        raise ValueError("grid spacings must be positive")
    a = c * np.sqrt(np.sum(1.0 / np.square(h)))
    b = omega_p / np.sqrt(eps_r)

    def f(dt):
        return rc4_bound_residual(a * dt, b * dt)

    # f(0) = 48 > 0; Lambda = 1 alone already makes f <= 0 at b = 0, and the
    # Omega terms only lower f below Omega^2 = 9, so dt <= 1/a brackets the root
    # whenever the Omega cap does not bind first.
    hi = 1.0 / a
    grid = np.linspace(0.0, hi, 257)
    vals = f(grid)
    idx = np.flatnonzero(vals <= 0)
    if not idx.size:
        return float(np.inf)
    j = idx[0]
    if vals[j] == 0:
        return float(grid[j])
    return float(brentq(f, grid[j - 1], grid[j], xtol=1e-300, rtol=1e-12 * 4))


def rc4_timestep(
    c: float, omega_p: float, eps_r: float, gamma: float, h: Sequence[float], safety: float = 1.0
) -> float:
    """Practical stable time step of the RC4 scheme.

    ``dt = safety * min(dt_q, 2 sqrt(eps_r)/omega_p (1 - 1e-9), 0.68/gamma)``,
    where ``dt_q`` is :func:`rc4_quartic_step`.
    """
    if not 0 < safety <= 1:
        raise ValueError("safety must lie in (0, 1]")
    caps = [rc4_quartic_step(c, omega_p, eps_r, h)]
    if omega_p > 0:
        caps.append(2 * np.sqrt(eps_r) / omega_p * (1 - 1e-9))
    if gamma > 0:
        caps.append(0.68 / gamma)
    return float(safety * min(caps))


def rc4_gamma_limit_residual(Gamma, Omega):
    """Left-hand side of the transcendental curve bounding ``Gamma``."""
    G = np.asarray(Gamma, dtype=float)
    O2 = float(Omega) ** 2
    e = np.exp
    return (
        2 / 3 * G * O2 + O2 + 4 * G - 12
        + e(-G) * (G**2 * O2 + G * (-1.25 * O2 + 7.5) - 2 * O2 + 24)
        + e(-2 * G) * (17 / 6 * G * O2 + O2 - 17 * G - 12)
        + e(-3 * G) * G * (-4 / 3 * O2 + 8)
        + e(-4 * G) * G * (0.5 * O2 - 3)
        - 1 / 12 * e(-5 * G) * G * (O2 - 6)
    )


def rc4_gamma_limit(omega_nd: float, lo: float = 1e-6, hi: float = 5.0) -> float:
    """Smallest ``Gamma > 0`` on the damping limit curve for a given ``Omega``.

    Near ``Gamma = 0`` the residual vanishes to high order and is dominated by
    rounding, so the bracket starts at the first sign change whose endpoint
    values both exceed ``1e-12`` in magnitude.

    Raises
    ------
    ValueError
        If ``|Omega| >= 2`` or there is no sign change on ``[lo, hi]``.
    """
    if abs(omega_nd) >= 2:
        raise ValueError("|Omega| must be below 2")
    grid = np.linspace(lo, hi, 5001)
    vals = rc4_gamma_limit_residual(grid, omega_nd)
    robust = np.abs(vals) > 1e-12
    prev = None
    for j in np.flatnonzero(robust):
        if prev is not None and np.sign(vals[j]) != np.sign(vals[prev]):
            return float(brentq(lambda g: rc4_gamma_limit_residual(g, omega_nd), grid[prev], grid[j], xtol=1e-14))
        prev = j
    raise ValueError(f"no root of the damping limit curve on [{lo}, {hi}] for Omega = {omega_nd}")
