"""Brute-force steady-state oracles, independent of the Green's-function path.

Three routes to steady-state correlations, all derived directly from the
master equation and deliberately sharing no code with :mod:`nhtopo.keldysh`:

* :func:`moment_ode_steady_state` closes the equation of motion for the
  covariance C_jl = <psi_l^dag psi_j> (a linear matrix ODE with a constant
  source) and solves its fixed point as a Sylvester equation;
* :func:`fock_lindblad_steady_state` builds the full Lindblad superoperator
  on a truncated Hilbert space and extracts the kernel density matrix;
* :func:`regression_spectrum` propagates the two-time correlation with the
  moment drift (quantum regression) and Fourier transforms it numerically.

For the covariance convention above the moment equation reads

    dC/dt = -i [H, C] - (1/2) {gamma_decay^T, C}
            + eta * (1/2) {gamma_pump, C} + gamma_pump

with eta = +1 (bosons) / -1 (fermions), i.e. drift
D = -i H - gamma_decay^T / 2 + eta * gamma_pump / 2 and fixed point
D C + C D^dag + gamma_pump = 0.  The single-site limits n = p/(kappa - p)
(bosons) and n = p/(kappa + p) (fermions) pin the signs.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.linalg

from .errors import CutoffTooSmall, DegenerateSteadyState, UnstableModel
from .model import ModelSpec, Statistics

__all__ = [
    "CovarianceMethod",
    "CovarianceSteadyState",
    "moment_drift",
    "moment_ode_steady_state",
    "fock_lindblad_steady_state",
    "regression_spectrum",
    "regression_spectrum_matrix",
]


class CovarianceMethod(enum.Enum):
    MOMENT_ODE = "moment_ode"
    FOCK_INTEGRATOR = "fock_integrator"


@dataclass(frozen=True)
class CovarianceSteadyState:
    """Steady covariance C with C[j, l] = <psi_l^dag psi_j>."""

    covariance: np.ndarray
    method: CovarianceMethod


def moment_drift(model: ModelSpec) -> np.ndarray:
    """Drift matrix D of the first-moment / covariance equations."""
    eta = model.statistics.eta
    return (-1j * model.hamiltonian
            - 0.5 * model.gamma_decay.T
            + 0.5 * eta * model.gamma_pump)


def _require_decaying(drift: np.ndarray) -> None:
    max_re = float(np.max(np.linalg.eigvals(drift).real))
    if max_re >= -1e-12:
        raise UnstableModel(max_re)


def moment_ode_steady_state(model: ModelSpec) -> CovarianceSteadyState:
    """Fixed point of the covariance equation of motion.

    Solves D C + C D^dag = -gamma_pump and verifies the residual of the
    full right-hand side at the solution is below 1e-10.
    """
    drift = moment_drift(model)
    _require_decaying(drift)
    gp = np.asarray(model.gamma_pump, dtype=complex)
    cov = scipy.linalg.solve_sylvester(drift, drift.conj().T, -gp)
    cov = 0.5 * (cov + cov.conj().T)
    residual = float(np.max(np.abs(drift @ cov + cov @ drift.conj().T + gp)))
    if residual > 1e-10 * max(1.0, float(np.max(np.abs(gp)))):
        raise RuntimeError(f"Sylvester fixed point residual {residual:.3e}")
    return CovarianceSteadyState(covariance=cov,
                                 method=CovarianceMethod.MOMENT_ODE)


# ---------------------------------------------------------------------------
# Truncated-Fock Lindblad integrator


def _site_operators(n_sites: int, statistics: Statistics, cutoff: int):
    """Annihilation operators for each site as sparse matrices.

    Bosons: truncated oscillators with at most ``cutoff`` quanta per site.
    Fermions: Jordan-Wigner strings (exact anticommutation, no cutoff).
    """
    if statistics is Statistics.BOSONIC:
        dim = cutoff + 1
        a = sp.diags(np.sqrt(np.arange(1, dim)), 1, format="csr",
                     dtype=complex)
        locals_ = [a] * n_sites
        strings = [sp.identity(dim, format="csr", dtype=complex)] * n_sites
    else:
        dim = 2
        a = sp.csr_matrix(np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex))
        z = sp.csr_matrix(np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex))
        locals_ = [a] * n_sites
        strings = [z] * n_sites

    eye = sp.identity(dim, format="csr", dtype=complex)
    ops = []
    for j in range(n_sites):
        factors = []
        for i in range(n_sites):
            if i < j:
                factors.append(strings[i] if statistics is Statistics.FERMIONIC
                               else eye)
            elif i == j:
                factors.append(locals_[j])
            else:
                factors.append(eye)
        op = factors[0]
        for f in factors[1:]:
            op = sp.kron(op, f, format="csr")
        ops.append(op)
    return ops, dim**n_sites


def _lindblad_superoperator(model: ModelSpec, cutoff: int):
    """Sparse generator acting on row-major vectorized density matrices."""
    psis, dim = _site_operators(model.n_sites, model.statistics, cutoff)
    dags = [p.conj().T.tocsr() for p in psis]
    eye = sp.identity(dim, format="csr", dtype=complex)

    h_op = sp.csr_matrix((dim, dim), dtype=complex)
    k_d = sp.csr_matrix((dim, dim), dtype=complex)
    k_p = sp.csr_matrix((dim, dim), dtype=complex)
    jump = sp.csr_matrix((dim * dim, dim * dim), dtype=complex)
    gd = model.gamma_decay
    gp = model.gamma_pump
    for a in range(model.n_sites):
        for b in range(model.n_sites):
            if model.hamiltonian[a, b] != 0:
                h_op = h_op + model.hamiltonian[a, b] * (dags[a] @ psis[b])
            if gd[a, b] != 0:
                k_d = k_d + gd[a, b] * (dags[b] @ psis[a])
                jump = jump + gd[a, b] * sp.kron(psis[a], dags[b].T,
                                                 format="csr")
            if gp[a, b] != 0:
                k_p = k_p + gp[a, b] * (psis[b] @ dags[a])
                jump = jump + gp[a, b] * sp.kron(dags[a], psis[b].T,
                                                 format="csr")

    lind = -1j * (sp.kron(h_op, eye, format="csr")
                  - sp.kron(eye, h_op.T, format="csr"))
    lind = lind + jump
    anti = k_d + k_p
    lind = lind - 0.5 * (sp.kron(anti, eye, format="csr")
                         + sp.kron(eye, anti.T, format="csr"))
    return lind.tocsc(), psis, dags, dim


def _kernel_density(lind, dim: int) -> np.ndarray:
    """Steady density matrix: eigenvector of the eigenvalue nearest zero."""
    size = dim * dim
    scale = max(1.0, float(np.abs(lind).max()))
    if size <= 1600:
        vals, vecs = np.linalg.eig(lind.toarray())
    else:
        sigma = 1e-9 * scale
        try:
            vals, vecs = sp.linalg.eigs(lind, k=4, sigma=sigma, which="LM")
        except RuntimeError:
            vals, vecs = sp.linalg.eigs(lind, k=4, sigma=1e-5 * scale,
                                        which="LM")
    order = np.argsort(np.abs(vals))
    lam0 = vals[order[0]]
    if abs(lam0) > 1e-7 * scale:
        raise RuntimeError(
            f"no kernel vector found (smallest |eigenvalue| {abs(lam0):.3e})")
    if order.size > 1 and abs(vals[order[1]]) < 1e-9 * scale:
        raise DegenerateSteadyState(
            "Lindblad generator has a (numerically) degenerate kernel")
    rho = vecs[:, order[0]].reshape(dim, dim)
    rho = 0.5 * (rho + rho.conj().T)
    tr = np.trace(rho)
    if abs(tr) < 1e-10:
        raise DegenerateSteadyState("kernel vector is traceless")
    return rho / tr


def _covariance_from_density(rho, psis, dags, n_sites) -> np.ndarray:
    cov = np.empty((n_sites, n_sites), dtype=complex)
    for j in range(n_sites):
        for l in range(n_sites):
            cov[j, l] = np.trace((dags[l] @ psis[j] @ rho))
    return 0.5 * (cov + cov.conj().T)


def fock_lindblad_steady_state(model: ModelSpec,
                               cutoff: int = 6) -> CovarianceSteadyState:
    """Steady covariance from the full master equation on a truncated space.

    Restricted to tiny lattices (N <= 3) and, for bosons, local cutoffs of
    at most 8 quanta.  Fermions need no cutoff (Pauli exclusion is exact in
    the Jordan-Wigner representation).

    Raises
    ------
    CutoffTooSmall
        For bosons, when raising the cutoff by one changes any covariance
        entry by more than 1% of the covariance scale.
    """
    if model.n_sites > 3:
        raise ValueError("Fock-space oracle is limited to n_sites <= 3")
    _require_decaying(moment_drift(model))

    def solve(cut):
        lind, psis, dags, dim = _lindblad_superoperator(model, cut)
        rho = _kernel_density(lind, dim)
        return _covariance_from_density(rho, psis, dags, model.n_sites)

    if model.statistics is Statistics.FERMIONIC:
        cov = solve(0)
    else:
        if not 1 <= cutoff <= 8:
            raise ValueError("bosonic cutoff must be between 1 and 8")
        cov = solve(cutoff)
        cov_up = solve(cutoff + 1)
        scale = max(float(np.max(np.abs(cov_up))), 1e-12)
        drift = float(np.max(np.abs(cov_up - cov))) / scale
        if drift > 0.01:
            raise CutoffTooSmall(cutoff, drift)
        cov = cov_up
    return CovarianceSteadyState(covariance=cov,
                                 method=CovarianceMethod.FOCK_INTEGRATOR)


# ---------------------------------------------------------------------------
# Quantum-regression spectrum


def regression_spectrum_matrix(model: ModelSpec, omegas,
                               t_max: float | None = None,
                               n_steps: int = 8192) -> np.ndarray:
    """Full steady-state correlation spectrum matrix over a frequency grid.

    Evolves the two-time function W(tau)[l, j] = <psi_l^dag(t+tau) psi_j(t)>
    with the conjugated moment drift (quantum regression theorem), extends
    it to tau < 0 by Hermitian symmetry and Fourier transforms numerically
    (composite Simpson).  Entry [m, j, l] of the result matches the
    frequency-resolved correlation matrix entry M[j, l](omegas[m]).

    Parameters
    ----------
    omegas : array_like
        Real frequencies at which to evaluate the spectrum.
    t_max : float, optional
        Correlation-time horizon; defaults to 24 over the slowest decay rate.
    n_steps : int
        Number of (even) Simpson steps on [0, t_max].
    """
    drift = moment_drift(model)
    _require_decaying(drift)
    cov = moment_ode_steady_state(model).covariance

    rates = -np.linalg.eigvals(drift).real
    if t_max is None:
        t_max = 24.0 / float(np.min(rates))
    if n_steps % 2:
        n_steps += 1
    dt = t_max / n_steps
    taus = np.linspace(0.0, t_max, n_steps + 1)

    # W(tau) = expm(conj(D) tau) C^T, evaluated on the tau grid.
    prop = scipy.linalg.expm(drift.conj() * dt)
    n = model.n_sites
    samples = np.empty((n_steps + 1, n, n), dtype=complex)
    w = cov.T.copy()
    samples[0] = w
    for i in range(1, n_steps + 1):
        w = prop @ w
        samples[i] = w

    weights = np.ones(n_steps + 1)
    weights[1:-1:2] = 4.0
    weights[2:-1:2] = 2.0
    weights *= dt / 3.0

    omegas = np.asarray(omegas, dtype=float)
    phases = np.exp(-1j * np.outer(omegas, taus)) * weights
    phi = np.einsum("wt,tab->wab", phases, samples)
    return (phi + phi.conj().transpose(0, 2, 1)).transpose(0, 2, 1)


def regression_spectrum(model: ModelSpec, j: int, l: int, omegas,
                        t_max: float | None = None,
                        n_steps: int = 8192) -> np.ndarray:
    """Correlation spectrum between sites j and l (0-based); see
    :func:`regression_spectrum_matrix`."""
    full = regression_spectrum_matrix(model, omegas, t_max, n_steps)
    return full[:, j, l]
