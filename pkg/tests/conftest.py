import numpy as np
import pytest

from nhtopo import Boundary, HatanoNelsonParams, Statistics, build_hatano_nelson

PHI = np.pi / 2


@pytest.fixture
def fig_params():
    """The reference chain family: kappa/t_d = 4, t_c = t_d = 1, phi = pi/2."""
    return HatanoNelsonParams(omega0=0.0, t_c=1.0, phi=PHI, kappa=4.0,
                              t_d=1.0, n_sites=20,
                              statistics=Statistics.BOSONIC,
                              boundary=Boundary.OPEN)


@pytest.fixture
def stable_open_model():
    """Stable open chain, kappa/t_d = 7."""
    return build_hatano_nelson(
        HatanoNelsonParams(omega0=0.0, t_c=1.0, phi=PHI, kappa=7.0, t_d=1.0,
                           n_sites=6))


def random_hermitian(rng, n, scale=1.0):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return scale * 0.5 * (a + a.conj().T)


def random_psd(rng, n, scale=1.0, real=True):
    """Random PSD rate matrix; real-symmetric by default (the regime in
    which the master-equation and Green's-function routes share one drift)."""
    if real:
        b = rng.normal(size=(n, n))
    else:
        b = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return scale * (b @ b.conj().T) / n
