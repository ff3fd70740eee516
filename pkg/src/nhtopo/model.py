"""Quadratic open-lattice models: real-space matrices and Bloch coefficient maps.

A model is specified by a Hermitian Hamiltonian ``H`` together with two
Hermitian, positive-semidefinite rate matrices: ``gamma_decay`` (local and
non-local loss) and ``gamma_pump`` (incoherent gain).  Translation-invariant
chains can equivalently be given as Laurent coefficient maps ``{d: c_d}``
with

    f(k) = sum_d c_d exp(i d k),

where offset ``d`` corresponds to the real-space matrix element
``A[j + d, j]`` (so ``d = -1`` is the superdiagonal).  Equivalently, the
plane-wave amplitudes are ``exp(-i k j)``.  This convention is fixed once
here; every winding sign downstream inherits it.

Sites are indexed 0 .. n_sites-1 in the Python API.  File formats and CSV
output label sites 1 .. N.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

__all__ = [
    "Statistics",
    "Boundary",
    "ModelSpec",
    "BlochModel",
    "HatanoNelsonParams",
    "ValidationReport",
    "build_hatano_nelson",
    "hatano_nelson_bloch",
    "validate",
    "evaluate_coeffs",
]

#: Tolerance used by :func:`validate` for Hermiticity residuals and for the
#: allowed negative eigenvalue excursion of the rate matrices.
VALIDATION_TOL = 1e-10


class Statistics(enum.Enum):
    """Particle statistics; selects the sign structure of the Keldysh blocks."""

    BOSONIC = "bosonic"
    FERMIONIC = "fermionic"

    @property
    def eta(self) -> int:
        """+1 for bosons, -1 for fermions."""
        return 1 if self is Statistics.BOSONIC else -1


class Boundary(enum.Enum):
    PERIODIC = "periodic"
    OPEN = "open"


def _as_complex_matrix(a, n: int, name: str) -> np.ndarray:
    m = np.array(a, dtype=complex)
    if m.shape != (n, n):
        raise ValueError(f"{name} must be {n}x{n}, got shape {m.shape}")
    m.setflags(write=False)
    return m


@dataclass(frozen=True)
class ModelSpec:
    """Real-space definition of a quadratic open lattice.

    Attributes
    ----------
    n_sites : int
        Lattice length N.
    hamiltonian : (N, N) complex ndarray
        Coherent part H (energy units), expected Hermitian.
    gamma_decay, gamma_pump : (N, N) complex ndarray
        Loss and gain rate matrices, expected Hermitian and PSD.
    statistics : Statistics
    boundary : Boundary

    Only shapes are enforced at construction; physical validity is checked
    by :func:`validate`, so deliberately invalid models can be built for
    testing.  Arrays are frozen (read-only) after construction.
    """

    n_sites: int
    hamiltonian: np.ndarray
    gamma_decay: np.ndarray
    gamma_pump: np.ndarray
    statistics: Statistics
    boundary: Boundary

    def __post_init__(self):
        if self.n_sites < 1:
            raise ValueError("n_sites must be positive")
        object.__setattr__(
            self, "hamiltonian",
            _as_complex_matrix(self.hamiltonian, self.n_sites, "hamiltonian"))
        object.__setattr__(
            self, "gamma_decay",
            _as_complex_matrix(self.gamma_decay, self.n_sites, "gamma_decay"))
        object.__setattr__(
            self, "gamma_pump",
            _as_complex_matrix(self.gamma_pump, self.n_sites, "gamma_pump"))


def evaluate_coeffs(coeffs: Mapping[int, complex], k) -> np.ndarray:
    """Evaluate a Laurent coefficient map at momenta ``k``.

    Returns sum_d c_d exp(i d k), vectorized over ``k``.
    """
    k = np.asarray(k, dtype=float)
    out = np.zeros(k.shape, dtype=complex)
    for d, c in coeffs.items():
        out += c * np.exp(1j * d * k)
    return out


def _check_coeff_hermiticity(coeffs: Mapping[int, complex], name: str):
    scale = max((abs(c) for c in coeffs.values()), default=0.0) or 1.0
    for d, c in coeffs.items():
        partner = coeffs.get(-d, 0.0)
        if abs(np.conj(c) - partner) > 1e-12 * scale:
            raise ValueError(
                f"{name} violates Hermiticity: coeff[{-d}] must equal "
                f"conj(coeff[{d}])")


@dataclass(frozen=True)
class BlochModel:
    """Translation-invariant chain given by scalar Laurent coefficient maps.

    ``hopping_coeffs`` holds H(k), ``decay_coeffs`` and ``pump_coeffs`` the
    two rate functions.  Hermiticity of each map and positivity of the pump
    on a momentum grid are enforced at construction.
    """

    hopping_coeffs: dict
    decay_coeffs: dict
    pump_coeffs: dict
    statistics: Statistics

    def __post_init__(self):
        for name in ("hopping_coeffs", "decay_coeffs", "pump_coeffs"):
            object.__setattr__(self, name, dict(getattr(self, name)))
        _check_coeff_hermiticity(self.hopping_coeffs, "hopping_coeffs")
        _check_coeff_hermiticity(self.decay_coeffs, "decay_coeffs")
        _check_coeff_hermiticity(self.pump_coeffs, "pump_coeffs")
        ks = np.linspace(-np.pi, np.pi, 361)
        pump = evaluate_coeffs(self.pump_coeffs, ks)
        scale = np.max(np.abs(pump)) or 1.0
        if np.min(pump.real) < -1e-10 * scale:
            raise ValueError("pump_coeffs not positive semidefinite on the "
                             "momentum grid")

    def h_k(self, k) -> np.ndarray:
        return evaluate_coeffs(self.hopping_coeffs, k)

    def gamma_decay_k(self, k) -> np.ndarray:
        return evaluate_coeffs(self.decay_coeffs, k)

    def gamma_pump_k(self, k) -> np.ndarray:
        return evaluate_coeffs(self.pump_coeffs, k)


@dataclass(frozen=True)
class HatanoNelsonParams:
    """Parameters of the dissipative Hatano-Nelson chain.

    omega0 is the on-site detuning, t_c > 0 the coherent hopping, phi the
    gauge phase (any real value, stored modulo 2 pi), kappa >= 0 the local
    loss and t_d >= 0 the dissipative-hopping rate that sets the non-local
    gain profile.
    """

    omega0: float
    t_c: float
    phi: float
    kappa: float
    t_d: float
    n_sites: int
    statistics: Statistics = Statistics.BOSONIC
    boundary: Boundary = Boundary.OPEN

    def __post_init__(self):
        if self.n_sites < 2:
            raise ValueError("n_sites must be at least 2")
        if self.t_c <= 0:
            raise ValueError("t_c must be positive")
        if self.kappa < 0 or self.t_d < 0:
            raise ValueError("rates kappa and t_d must be nonnegative")
        if self.boundary is Boundary.PERIODIC and self.n_sites < 3:
            # A 2-site ring would stack the wrap bond on the existing one.
            raise ValueError("periodic boundary needs n_sites >= 3")
        object.__setattr__(self, "phi", float(self.phi) % (2.0 * np.pi))


def build_hatano_nelson(params: HatanoNelsonParams) -> ModelSpec:
    """Assemble the real-space matrices of the dissipative Hatano-Nelson chain.

    H is tridiagonal with ``omega0`` on the diagonal and ``t_c e^{i phi}``
    on the superdiagonal; the loss is local, ``gamma_decay = kappa * I``;
    the gain is ``gamma_pump = 4 t_d`` on the diagonal and ``2 t_d`` on both
    off-diagonals (a common-bath profile, so the local gain is always twice
    the non-local one).  Periodic boundaries wrap the corner elements.
    """
    n = params.n_sites
    hop = params.t_c * np.exp(1j * params.phi)

    ham = np.zeros((n, n), dtype=complex)
    np.fill_diagonal(ham, params.omega0)
    idx = np.arange(n - 1)
    ham[idx, idx + 1] = hop
    ham[idx + 1, idx] = np.conj(hop)

    pump = np.zeros((n, n), dtype=complex)
    np.fill_diagonal(pump, 4.0 * params.t_d)
    pump[idx, idx + 1] = 2.0 * params.t_d
    pump[idx + 1, idx] = 2.0 * params.t_d

    if params.boundary is Boundary.PERIODIC:
        ham[n - 1, 0] = hop
        ham[0, n - 1] = np.conj(hop)
        pump[n - 1, 0] = 2.0 * params.t_d
        pump[0, n - 1] = 2.0 * params.t_d

    decay = params.kappa * np.eye(n, dtype=complex)
    return ModelSpec(n_sites=n, hamiltonian=ham, gamma_decay=decay,
                     gamma_pump=pump, statistics=params.statistics,
                     boundary=params.boundary)


def hatano_nelson_bloch(params: HatanoNelsonParams) -> BlochModel:
    """Bloch coefficient maps of the Hatano-Nelson chain (assumes PBC).

    With the module convention the evaluated dispersion is
    H(k) = omega0 + 2 t_c cos(k - phi) and the gain profile is
    gamma_pump(k) = 8 t_d cos^2(k/2) >= 0.  The boundary field of ``params``
    is ignored.
    """
    hop = params.t_c * np.exp(1j * params.phi)
    return BlochModel(
        hopping_coeffs={-1: hop, 0: complex(params.omega0), +1: np.conj(hop)},
        decay_coeffs={0: complex(params.kappa)},
        pump_coeffs={-1: 2.0 * params.t_d, 0: 4.0 * params.t_d,
                     +1: 2.0 * params.t_d},
        statistics=params.statistics,
    )


@dataclass
class ValidationReport:
    """Result of :func:`validate`: residuals, extremal eigenvalues, verdict."""

    hermiticity_residuals: dict = field(default_factory=dict)
    min_eigenvalues: dict = field(default_factory=dict)
    tolerance: float = VALIDATION_TOL
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def validate(model: ModelSpec) -> ValidationReport:
    """Check the physical-validity invariants of a model, report-style.

    Passes iff the Hamiltonian and both rate matrices are Hermitian within
    ``VALIDATION_TOL`` and the rate matrices have no eigenvalue below
    ``-VALIDATION_TOL``.  Never raises; inspect ``report.passed``.
    """
    report = ValidationReport()
    mats = {
        "hamiltonian": model.hamiltonian,
        "gamma_decay": model.gamma_decay,
        "gamma_pump": model.gamma_pump,
    }
    for name, m in mats.items():
        res = float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0
        report.hermiticity_residuals[name] = res
        if res > VALIDATION_TOL:
            report.failures.append(
                f"{name} is not Hermitian (residual {res:.3e})")
    for name in ("gamma_decay", "gamma_pump"):
        m = mats[name]
        herm = 0.5 * (m + m.conj().T)
        lo = float(np.min(np.linalg.eigvalsh(herm)))
        report.min_eigenvalues[name] = lo
        if lo < -VALIDATION_TOL:
            report.failures.append(
                f"{name} is not positive semidefinite "
                f"(minimum eigenvalue {lo:.3e})")
    return report
