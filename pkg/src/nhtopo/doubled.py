"""Doubled Hermitian form of the resolvent and its singular-value spectrum.

At each probe frequency the non-Hermitian problem is mapped onto the
Hermitian block matrix

    H_dbl(omega) = [[0, omega - H_R], [omega - H_A, 0]],

whose eigenvalues are the plus/minus pairs of the singular values eps_n of
(omega - H_R).  Unlike the eigenvalues of H_R itself, the eps_n are
insensitive to the open-boundary skin effect, and a vanishing eps_n signals
a topological zero mode whose singular vectors are exponentially localized
at opposite edges.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import SingularAtFrequency
from .keldysh import KeldyshBlocks, bloch_h_r, blocks_real_space
from .model import BlochModel, Boundary, ModelSpec

__all__ = [
    "SingularTriple",
    "EdgeModeReport",
    "doubled_hamiltonian",
    "singular_spectrum",
    "greens_from_svd",
    "edge_modes",
    "spectral_flow",
    "spectral_flow_bloch",
    "spectral_flow_k",
]


@dataclass(frozen=True)
class SingularTriple:
    """One singular value of (omega - H_R) with its singular vectors.

    ``u`` is the left singular vector, ``v`` the right one, normalized,
    with (omega - H_R) v = epsilon * u.
    """

    epsilon: float
    u: np.ndarray
    v: np.ndarray


def doubled_hamiltonian(blocks: KeldyshBlocks, omega: float) -> np.ndarray:
    """Hermitian 2N x 2N block matrix built from the resolvent at omega."""
    n = blocks.h_r.shape[0]
    a = omega * np.eye(n) - blocks.h_r
    zero = np.zeros((n, n), dtype=complex)
    return np.block([[zero, a], [a.conj().T, zero]])


def singular_spectrum(blocks: KeldyshBlocks, omega: float) -> list[SingularTriple]:
    """Full SVD of (omega - H_R), sorted by ascending singular value.

    Well defined at singular frequencies too (epsilon = 0 is the signal of
    interest there).
    """
    n = blocks.h_r.shape[0]
    a = omega * np.eye(n) - blocks.h_r
    u_mat, s, vh = np.linalg.svd(a)
    order = np.argsort(s)  # LAPACK returns descending
    return [SingularTriple(epsilon=float(s[i]), u=u_mat[:, i],
                           v=vh[i].conj()) for i in order]


def greens_from_svd(spectrum: list[SingularTriple]) -> np.ndarray:
    """Reconstruct G_R as sum_n (1/eps_n) v_n u_n^dagger.

    Raises
    ------
    SingularAtFrequency
        If any singular value is at or below 1e-12 (zero mode present).
    """
    eps = np.array([t.epsilon for t in spectrum])
    if np.any(eps <= 1e-12):
        raise SingularAtFrequency(np.nan, float(eps.min()) / float(eps.max()))
    g = np.zeros((spectrum[0].u.size,) * 2, dtype=complex)
    for t in spectrum:
        g += np.outer(t.v, t.u.conj()) / t.epsilon
    return g


@dataclass
class EdgeModeReport:
    """Near-zero singular modes of an open chain with their edge weights.

    ``left_weights[i]`` is the fraction of |u_i|^2 inside the boundary
    windows (the outer ``edge_fraction`` of sites at each end) and
    ``right_weights[i]`` the same for v_i; ``u_ends`` / ``v_ends`` record
    which end carries more weight.  A mode counts as edge-localized when
    either weight exceeds ``localization_criterion``.
    """

    count: int
    epsilons: list = field(default_factory=list)
    left_weights: list = field(default_factory=list)
    right_weights: list = field(default_factory=list)
    u_ends: list = field(default_factory=list)
    v_ends: list = field(default_factory=list)
    edge_localized: list = field(default_factory=list)
    threshold: float = 0.0
    edge_fraction: float = 0.2
    localization_criterion: float = 0.9


def _edge_stats(vec: np.ndarray, n_edge: int):
    w = np.abs(vec) ** 2
    left = float(np.sum(w[:n_edge]))
    right = float(np.sum(w[-n_edge:]))
    return left + right, ("left" if left >= right else "right")


def edge_modes(model: ModelSpec, omega: float, threshold: float | None = None,
               edge_fraction: float = 0.2,
               localization_criterion: float = 0.9) -> EdgeModeReport:
    """Detect topological boundary modes of an open chain at frequency omega.

    Modes are singular values below ``threshold`` (default: relative
    threshold 1e-6 times the operator norm of omega - H_R).

    Raises
    ------
    ValueError
        For periodic models; boundary modes are an open-chain notion.
    """
    if model.boundary is not Boundary.OPEN:
        raise ValueError("edge_modes requires an open-boundary model")
    blocks = blocks_real_space(model)
    spec = singular_spectrum(blocks, omega)
    if threshold is None:
        threshold = 1e-6 * spec[-1].epsilon
    n_edge = max(1, int(np.ceil(edge_fraction * model.n_sites)))
    report = EdgeModeReport(count=0, threshold=float(threshold),
                            edge_fraction=edge_fraction,
                            localization_criterion=localization_criterion)
    for t in spec:
        if t.epsilon >= threshold:
            break
        uw, uend = _edge_stats(t.u, n_edge)
        vw, vend = _edge_stats(t.v, n_edge)
        report.count += 1
        report.epsilons.append(t.epsilon)
        report.left_weights.append(uw)
        report.right_weights.append(vw)
        report.u_ends.append(uend)
        report.v_ends.append(vend)
        report.edge_localized.append(
            uw > localization_criterion or vw > localization_criterion)
    return report


def spectral_flow(model: ModelSpec, omegas) -> np.ndarray:
    """Singular values of (omega - H_R) along a frequency grid.

    Returns an (n_omega, N) array, each row ascending.  The doubled-form
    eigenvalues at each omega are the plus/minus pairs of that row.
    """
    blocks = blocks_real_space(model)
    omegas = np.asarray(omegas, dtype=float)
    n = model.n_sites
    out = np.empty((omegas.size, n))
    eye = np.eye(n)
    for i, w in enumerate(omegas):
        s = np.linalg.svd(w * eye - blocks.h_r, compute_uv=False)
        out[i] = s[::-1]
    return out


def _k_grid(n_k: int) -> np.ndarray:
    return -np.pi + 2.0 * np.pi * np.arange(n_k) / n_k


def spectral_flow_bloch(bloch: BlochModel, omegas, n_k: int = 256) -> np.ndarray:
    """Bloch singular values eps(k; omega) = |omega - H_R(k)| on a k-grid.

    Returns an (n_omega, n_k) array (rows not sorted; columns follow the
    k-grid -pi .. pi).
    """
    ks = _k_grid(n_k)
    hr = bloch_h_r(bloch, ks)
    omegas = np.asarray(omegas, dtype=float)
    return np.abs(omegas[:, None] - hr[None, :])


def spectral_flow_k(bloch: BlochModel, omega: float, n_k: int = 256):
    """Band eps(k) = |omega - H_R(k)| at fixed omega; returns (k, eps)."""
    ks = _k_grid(n_k)
    return ks, np.abs(omega - bloch_h_r(bloch, ks))
