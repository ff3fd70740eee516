"""Exception types shared across the package."""


class NhtopoError(Exception):
    """Base class for all package-specific errors."""


class SingularAtFrequency(NhtopoError):
    """The resolvent (omega - H_R)^-1 is numerically singular at this frequency."""

    def __init__(self, omega, rcond):
        self.omega = omega
        self.rcond = rcond
        super().__init__(
            f"omega = {omega:g} is numerically an eigenvalue of the effective "
            f"Hamiltonian (reciprocal condition number {rcond:.3e})"
        )


class CriticalPoint(NhtopoError):
    """Winding number undefined: the Bloch curve passes through the probe point."""


class UnstableModel(NhtopoError):
    """No steady state: the effective Hamiltonian has non-decaying eigenvalues."""

    def __init__(self, max_im):
        self.max_im = max_im
        super().__init__(
            f"model has no steady state (largest Im eigenvalue = {max_im:+.3e})"
        )


class NoCrossing(NhtopoError):
    """Fitted log-susceptibility lines are near-parallel; no crossing frequency."""


class CutoffTooSmall(NhtopoError):
    """Fock-space truncation is not converged at the requested cutoff."""

    def __init__(self, cutoff, drift):
        self.cutoff = cutoff
        self.drift = drift
        super().__init__(
            f"covariance changes by {drift:.2%} when the local cutoff grows "
            f"from {cutoff} to {cutoff + 1}"
        )


class DegenerateSteadyState(NhtopoError):
    """The Lindblad generator has more than one (numerical) steady state."""


class ConfigError(NhtopoError):
    """A run configuration file could not be parsed or is inconsistent."""


class MarginalStabilityWarning(UserWarning):
    """Largest decay rate is numerically zero; response functions remain finite
    for real frequencies away from the eigenvalue set."""
