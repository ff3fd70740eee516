"""Particle-number susceptibility and critical-point extraction.

chi_jl(omega) is the derivative of the occupation spectrum at site j with
respect to a static frequency shift Omega_l added to H at site l.  In
closed form

    chi_jl(omega) = 2 Re[ G_R[j, l](omega) * M[l, j](omega) ],

equivalent to the two-term expression G_R[j,l] M[l,j] + M[j,l] G_A[l,j]
because G_A = G_R^dag and M is Hermitian.  In an amplifying phase
log |chi| is affine both in the probe distance and, near the transition,
in omega, so the curves for different probe sites cross at the critical
frequency; :func:`critical_point` extracts it by a joint least-squares fit.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.optimize

from .errors import MarginalStabilityWarning, NoCrossing, UnstableModel
from .keldysh import blocks_real_space, greens, stability
from .model import ModelSpec

__all__ = [
    "SusceptibilityMap",
    "CriticalFit",
    "susceptibility",
    "susceptibility_map",
    "greens_derivative_identity",
    "critical_point",
]


@dataclass(frozen=True)
class SusceptibilityMap:
    """chi over a frequency grid: values[i, m] = chi_{sites[i], source}(omegas[m])."""

    omegas: np.ndarray
    source: int
    sites: np.ndarray
    values: np.ndarray


@dataclass
class CriticalFit:
    """Joint fit log|chi_j(omega)| ~ alpha - x_j (omega - beta).

    ``beta`` estimates the critical frequency, ``alpha`` the common value at
    the crossing, ``slopes[i]`` the per-site coefficient x_j.  ``crossings``
    holds the pairwise intersection frequencies of the initial per-site
    lines as a consistency diagnostic.
    """

    alpha: float
    beta: float
    slopes: np.ndarray
    residual: float
    crossings: list = field(default_factory=list)
    beta_in_window: bool = True


#: Marginal-stability band.  Defective (Jordan-block) effective Hamiltonians
#: such as the fully unidirectional chain have exactly-zero eigenvalues that
#: dense eigensolvers resolve only to ~1e-8, so the band must sit above that
#: noise floor.
MARGINAL_TOL = 1e-7


def _check_steady_state(model: ModelSpec) -> None:
    rep = stability(model)
    if rep.max_im > MARGINAL_TOL:
        raise UnstableModel(rep.max_im)
    if rep.max_im >= -MARGINAL_TOL:
        warnings.warn(
            "model is marginally stable (max Im eigenvalue "
            f"{rep.max_im:+.2e}); response functions are evaluated at real "
            "frequencies only", MarginalStabilityWarning, stacklevel=3)


def susceptibility(model: ModelSpec, omega: float, l: int,
                   _skip_stability: bool = False) -> np.ndarray:
    """Occupation response of every site to a frequency shift at site l.

    Returns the real N-vector chi_{., l}(omega).  The model must have a
    steady state; a marginally stable model is accepted with a warning.

    Parameters
    ----------
    l : int
        Source site, 0-based.
    """
    if not 0 <= l < model.n_sites:
        raise ValueError(f"source site {l} outside 0..{model.n_sites - 1}")
    if not _skip_stability:
        _check_steady_state(model)
    blocks = blocks_real_space(model)
    g = greens(blocks, omega)
    m = g.g_r @ model.gamma_pump @ g.g_a
    return 2.0 * np.real(g.g_r[:, l] * m[l, :])


def susceptibility_map(model: ModelSpec, omegas, l: int,
                       sites=None) -> SusceptibilityMap:
    """Evaluate chi_{j, l} for the requested probe sites over a frequency grid."""
    _check_steady_state(model)
    omegas = np.asarray(omegas, dtype=float)
    if sites is None:
        sites = np.arange(model.n_sites)
    sites = np.asarray(sites, dtype=int)
    values = np.empty((sites.size, omegas.size))
    for m_idx, w in enumerate(omegas):
        chi = susceptibility(model, float(w), l, _skip_stability=True)
        values[:, m_idx] = chi[sites]
    return SusceptibilityMap(omegas=omegas, source=l, sites=sites,
                             values=values)


def greens_derivative_identity(model: ModelSpec, omega: float, l: int,
                               eps: float = 1e-6) -> float:
    """Relative residual of the resolvent derivative identity.

    Compares the forward difference of G_R under a shift eps at site l
    against G_R 1_l G_R and returns
    ||FD - G_R 1_l G_R|| / ||G_R 1_l G_R|| (Frobenius).
    """
    blocks = blocks_real_space(model)
    g0 = greens(blocks, omega).g_r

    ham = model.hamiltonian.copy()
    ham[l, l] += eps
    shifted = ModelSpec(n_sites=model.n_sites, hamiltonian=ham,
                        gamma_decay=model.gamma_decay,
                        gamma_pump=model.gamma_pump,
                        statistics=model.statistics, boundary=model.boundary)
    g1 = greens(blocks_real_space(shifted), omega).g_r

    fd = (g1 - g0) / eps
    exact = np.outer(g0[:, l], g0[l, :])
    denom = np.linalg.norm(exact)
    return float(np.linalg.norm(fd - exact) / denom)


def _per_site_lines(omegas: np.ndarray, logs: np.ndarray):
    """Ordinary least-squares line a + b*omega for each probe site."""
    design = np.column_stack([np.ones_like(omegas), omegas])
    coef, *_ = np.linalg.lstsq(design, logs.T, rcond=None)
    return coef[0], coef[1]  # intercepts a_j, slopes b_j


def critical_point(model: ModelSpec, omegas, l: int, probe_sites,
                   min_abs_chi: float = 1e-300) -> CriticalFit:
    """Estimate the critical frequency from log-susceptibility crossings.

    Fits log|chi_j(omega)| jointly to alpha - x_j (omega - beta) with a
    shared crossing point (alpha, beta) and free per-site coefficients x_j,
    initialized from the pairwise intersections of independent per-site
    lines.

    Raises
    ------
    NoCrossing
        When the per-site lines are near-parallel (all slopes within 1e-6).
    """
    probe_sites = np.asarray(probe_sites, dtype=int)
    if probe_sites.size < 3:
        raise ValueError("need at least 3 probe sites")
    smap = susceptibility_map(model, omegas, l, probe_sites)
    absvals = np.abs(smap.values)
    if np.min(absvals) <= min_abs_chi:
        raise NoCrossing("susceptibility vanishes on the grid; no "
                         "amplification crossover to fit")
    logs = np.log(absvals)

    a_j, b_j = _per_site_lines(smap.omegas, logs)
    if float(np.max(b_j) - np.min(b_j)) < 1e-6:
        raise NoCrossing("per-site log-susceptibility slopes are parallel")

    crossings = []
    n_probe = probe_sites.size
    for i in range(n_probe):
        for k in range(i + 1, n_probe):
            if abs(b_j[k] - b_j[i]) > 1e-9:
                crossings.append(float((a_j[i] - a_j[k]) / (b_j[k] - b_j[i])))
    beta0 = float(np.median(crossings))
    x0 = -b_j
    alpha0 = float(np.median(a_j + b_j * beta0))

    def residuals(theta):
        alpha, beta = theta[0], theta[1]
        x = theta[2:]
        pred = alpha - np.outer(x, smap.omegas - beta)
        return (pred - logs).ravel()

    theta0 = np.concatenate([[alpha0, beta0], x0])
    sol = scipy.optimize.least_squares(residuals, theta0, method="lm",
                                       xtol=1e-14, ftol=1e-14)
    res = residuals(sol.x)
    fit = CriticalFit(
        alpha=float(sol.x[0]),
        beta=float(sol.x[1]),
        slopes=np.array(sol.x[2:]),
        residual=float(np.sqrt(np.mean(res**2))),
        crossings=crossings,
        beta_in_window=bool(smap.omegas.min() <= sol.x[1] <= smap.omegas.max()),
    )
    return fit
