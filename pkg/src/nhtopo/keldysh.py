"""Effective non-Hermitian Hamiltonians, Green's functions and correlations.

The retarded block is

    bosons:   H_R = H - i (gamma_decay - gamma_pump) / 2
    fermions: H_R = H - i (gamma_decay + gamma_pump) / 2

with H_A = H_R^dagger, and the noise kernel is Gamma = gamma_decay +
gamma_pump (bosons) or gamma_decay - gamma_pump (fermions).  The retarded
sign is fixed so that a pure-loss model is causal: all its poles sit in the
lower half of the complex frequency plane.

Green's functions at real frequency omega:

    G_R = (omega - H_R)^-1,   G_A = G_R^dagger,   G_K = G_R (-i Gamma) G_A

and the frequency-resolved correlation matrix is

    M(omega) = G_R gamma_pump G_A,

whose diagonal is the occupation spectrum; the total occupation matrix is
(1/2pi) integral of M over omega (see :func:`integrate_correlation`).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SingularAtFrequency, UnstableModel
from .model import BlochModel, ModelSpec, Statistics

__all__ = [
    "KeldyshBlocks",
    "GreensFunctions",
    "StabilityReport",
    "blocks_real_space",
    "blocks_bloch",
    "bloch_h_r",
    "greens",
    "correlation_matrix",
    "correlation_statistics_combination",
    "stability",
    "integrate_correlation",
]

#: Reciprocal-condition-number threshold below which (omega - H_R) is
#: treated as singular.
RCOND_MIN = 1e-12


@dataclass(frozen=True)
class KeldyshBlocks:
    """The three matrices entering the frequency-domain action."""

    h_r: np.ndarray
    h_a: np.ndarray
    gamma: np.ndarray
    statistics: Statistics


@dataclass(frozen=True)
class GreensFunctions:
    """Retarded, advanced and Keldysh Green's functions at one frequency."""

    omega: float
    g_r: np.ndarray
    g_a: np.ndarray
    g_k: np.ndarray


@dataclass(frozen=True)
class StabilityReport:
    """Largest imaginary part of the H_R spectrum and the stability verdict."""

    max_im: float
    stable: bool


def blocks_real_space(model: ModelSpec) -> KeldyshBlocks:
    """Build H_R, H_A and Gamma from the real-space model matrices."""
    h = model.hamiltonian
    gd = model.gamma_decay
    gp = model.gamma_pump
    if model.statistics is Statistics.BOSONIC:
        h_r = h - 0.5j * (gd - gp)
        gamma = gd + gp
    else:
        h_r = h - 0.5j * (gd + gp)
        gamma = gd - gp
    return KeldyshBlocks(h_r=h_r, h_a=h_r.conj().T, gamma=gamma,
                         statistics=model.statistics)


def bloch_h_r(bloch: BlochModel, k) -> np.ndarray:
    """Scalar H_R(k), vectorized over momenta."""
    h = bloch.h_k(k)
    gd = bloch.gamma_decay_k(k)
    gp = bloch.gamma_pump_k(k)
    if bloch.statistics is Statistics.BOSONIC:
        return h - 0.5j * (gd - gp)
    return h - 0.5j * (gd + gp)


def blocks_bloch(bloch: BlochModel, k: float) -> KeldyshBlocks:
    """Keldysh blocks at a single momentum (1x1 matrices)."""
    h_r = np.array([[complex(bloch_h_r(bloch, k))]])
    gd = complex(bloch.gamma_decay_k(k))
    gp = complex(bloch.gamma_pump_k(k))
    gamma = gd + gp if bloch.statistics is Statistics.BOSONIC else gd - gp
    return KeldyshBlocks(h_r=h_r, h_a=h_r.conj().T,
                         gamma=np.array([[gamma]]),
                         statistics=bloch.statistics)


def greens(blocks: KeldyshBlocks, omega: float) -> GreensFunctions:
    """Invert the resolvent at a real frequency.

    Raises
    ------
    SingularAtFrequency
        If the reciprocal condition number of (omega - H_R) falls below
        ``RCOND_MIN``, i.e. omega is numerically an eigenvalue of H_R.
    """
    n = blocks.h_r.shape[0]
    a = omega * np.eye(n) - blocks.h_r
    s = np.linalg.svd(a, compute_uv=False)
    rcond = s[-1] / s[0] if s[0] > 0 else 0.0
    if rcond < RCOND_MIN:
        raise SingularAtFrequency(omega, rcond)
    g_r = np.linalg.solve(a, np.eye(n, dtype=complex))
    g_a = g_r.conj().T
    g_k = g_r @ (-1j * blocks.gamma) @ g_a
    return GreensFunctions(omega=omega, g_r=g_r, g_a=g_a, g_k=g_k)


def correlation_matrix(model: ModelSpec, omega: float) -> np.ndarray:
    """Frequency-resolved correlation matrix M(omega) = G_R gamma_pump G_A.

    The formula is the same for both statistics; the statistics only enters
    through H_R.  M is Hermitian and positive semidefinite, and its diagonal
    M_jj(omega) is the occupation spectrum of site j.
    """
    blocks = blocks_real_space(model)
    g = greens(blocks, omega)
    return g.g_r @ model.gamma_pump @ g.g_a


def correlation_statistics_combination(model: ModelSpec, omega: float) -> np.ndarray:
    """M(omega) via the Green's-function combination eta*(i/2)*(G_K + G_A - G_R).

    Algebraically identical to :func:`correlation_matrix` for either
    statistics; kept as an independent evaluation path for cross-checks.
    """
    blocks = blocks_real_space(model)
    g = greens(blocks, omega)
    eta = model.statistics.eta
    return eta * 0.5j * (g.g_k + g.g_a - g.g_r)


def stability(model: ModelSpec) -> StabilityReport:
    """Largest imaginary part over the H_R spectrum.

    A steady state exists only if every eigenvalue decays; the verdict is
    ``stable`` iff max Im < -1e-12.
    """
    blocks = blocks_real_space(model)
    lam = np.linalg.eigvals(blocks.h_r)
    max_im = float(np.max(lam.imag))
    return StabilityReport(max_im=max_im, stable=max_im < -1e-12)


def _correlation_batch(h_r: np.ndarray, gamma_pump: np.ndarray,
                       omegas: np.ndarray, chunk: int = 65536) -> np.ndarray:
    """Stack of M(omega) over a frequency grid, via batched inversion."""
    n = h_r.shape[0]
    eye = np.eye(n, dtype=complex)
    out = np.empty((omegas.size, n, n), dtype=complex)
    for start in range(0, omegas.size, chunk):
        w = omegas[start:start + chunk]
        a = w[:, None, None] * eye - h_r
        g_r = np.linalg.inv(a)
        g_a = g_r.conj().transpose(0, 2, 1)
        out[start:start + w.size] = g_r @ gamma_pump @ g_a
    return out


def integrate_correlation(model: ModelSpec, tol: float = 1e-8,
                          max_iter: int = 12) -> np.ndarray:
    """Total occupation matrix (1/2pi) * integral of M(omega) d omega.

    Adaptive trapezoid rule: the window is extended and the step halved
    until the result changes by less than ``tol`` elementwise.  The slowly
    decaying 1/omega^2 and 1/omega^4 tails outside the window are added
    analytically from the large-omega expansion of the resolvent.

    Raises
    ------
    UnstableModel
        If the model has no steady state (the integral would diverge).
    """
    rep = stability(model)
    if not rep.stable:
        raise UnstableModel(rep.max_im)
    blocks = blocks_real_space(model)
    h_r = blocks.h_r
    gp = model.gamma_pump
    lam = np.linalg.eigvals(h_r)
    # Initial window well beyond the spectrum; step resolving the narrowest
    # resonance.
    width = float(np.min(-lam.imag))
    span = float(np.max(np.abs(lam)))
    window = 8.0 * (span + 1.0)
    step = min(1.0, width) / 16.0

    hgp = h_r @ gp
    gph = gp @ h_r.conj().T
    quartic = h_r @ hgp + hgp @ h_r.conj().T + gph @ h_r.conj().T

    def attempt(window, step):
        m = int(np.ceil(window / step))
        omegas = np.linspace(-m * step, m * step, 2 * m + 1)
        mats = _correlation_batch(h_r, gp, omegas)
        total = np.trapezoid(mats, dx=step, axis=0) / (2.0 * np.pi)
        w_edge = m * step
        # Tails: integral over |omega| > W of the even terms of the
        # resolvent expansion.
        total += gp / (np.pi * w_edge)
        total += quartic / (3.0 * np.pi * w_edge**3)
        return total

    prev = attempt(window, step)
    for _ in range(max_iter):
        window *= 2.0
        step *= 0.5
        cur = attempt(window, step)
        if np.max(np.abs(cur - prev)) < tol:
            return cur
        prev = cur
    raise RuntimeError(
        "frequency integral did not converge; model may be too close to "
        "the stability boundary")
