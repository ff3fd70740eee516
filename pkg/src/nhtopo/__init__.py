"""Topology and response functions of quadratic open quantum lattices.

The package computes, for bosonic or fermionic gain/loss lattices defined
by a Hamiltonian and two Lindblad rate matrices:

* retarded/advanced/Keldysh Green's functions and the frequency-resolved
  correlation matrix M(omega) (:mod:`nhtopo.keldysh`);
* the Hermitian doubled form of the resolvent, its singular-value spectrum
  and topological boundary modes (:mod:`nhtopo.doubled`);
* frequency-dependent winding numbers of the Bloch eigenvalue loop, by
  Brillouin-zone phase accumulation and, for nearest-neighbor chains, by
  analytic root counting (:mod:`nhtopo.winding`);
* the particle-number susceptibility and the critical frequency extracted
  from its log-linear crossings (:mod:`nhtopo.response`);
* independent brute-force oracles (moment-ODE fixed point, truncated-Fock
  Lindblad kernel, quantum-regression spectra) that validate the
  Green's-function route (:mod:`nhtopo.oracles`).

The dissipative Hatano-Nelson chain is built in as the canonical example
(:mod:`nhtopo.model`), and :mod:`nhtopo.cli` exposes everything as a
reproducible command-line pipeline.
"""

__version__ = "0.1.0"

from .errors import (ConfigError, CriticalPoint, CutoffTooSmall,
                     DegenerateSteadyState, MarginalStabilityWarning,
                     NhtopoError, NoCrossing, SingularAtFrequency,
                     UnstableModel)
from .model import (BlochModel, Boundary, HatanoNelsonParams, ModelSpec,
                    Statistics, ValidationReport, build_hatano_nelson,
                    evaluate_coeffs, hatano_nelson_bloch, validate)
from .keldysh import (GreensFunctions, KeldyshBlocks, StabilityReport,
                      bloch_h_r, blocks_bloch, blocks_real_space,
                      correlation_matrix, correlation_statistics_combination,
                      greens, integrate_correlation, stability)
from .doubled import (EdgeModeReport, SingularTriple, doubled_hamiltonian,
                      edge_modes, greens_from_svd, singular_spectrum,
                      spectral_flow, spectral_flow_bloch, spectral_flow_k)
from .winding import (PhaseDiagram, PointGapLoop, WindingCurve, WindingResult,
                      phase_diagram, point_gap_loop, winding_analytic,
                      winding_curve, winding_numerical)
from .response import (CriticalFit, SusceptibilityMap, critical_point,
                       greens_derivative_identity, susceptibility,
                       susceptibility_map)
from .oracles import (CovarianceMethod, CovarianceSteadyState,
                      fock_lindblad_steady_state, moment_drift,
                      moment_ode_steady_state, regression_spectrum,
                      regression_spectrum_matrix)

__all__ = [
    "__version__",
    # errors
    "NhtopoError", "SingularAtFrequency", "CriticalPoint", "UnstableModel",
    "NoCrossing", "CutoffTooSmall", "DegenerateSteadyState", "ConfigError",
    "MarginalStabilityWarning",
    # model
    "Statistics", "Boundary", "ModelSpec", "BlochModel", "HatanoNelsonParams",
    "ValidationReport", "build_hatano_nelson", "hatano_nelson_bloch",
    "validate", "evaluate_coeffs",
    # keldysh
    "KeldyshBlocks", "GreensFunctions", "StabilityReport", "blocks_real_space",
    "blocks_bloch", "bloch_h_r", "greens", "correlation_matrix",
    "correlation_statistics_combination", "stability", "integrate_correlation",
    # doubled
    "SingularTriple", "EdgeModeReport", "doubled_hamiltonian",
    "singular_spectrum", "greens_from_svd", "edge_modes", "spectral_flow",
    "spectral_flow_bloch", "spectral_flow_k",
    # winding
    "WindingResult", "WindingCurve", "PointGapLoop", "PhaseDiagram",
    "winding_numerical", "winding_curve", "winding_analytic",
    "point_gap_loop", "phase_diagram",
    # response
    "SusceptibilityMap", "CriticalFit", "susceptibility", "susceptibility_map",
    "greens_derivative_identity", "critical_point",
    # oracles
    "CovarianceMethod", "CovarianceSteadyState", "moment_drift",
    "moment_ode_steady_state", "fock_lindblad_steady_state",
    "regression_spectrum", "regression_spectrum_matrix",
]
