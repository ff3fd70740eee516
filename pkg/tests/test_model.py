import numpy as np
import pytest

from nhtopo import (Boundary, HatanoNelsonParams, ModelSpec, Statistics,
                    build_hatano_nelson, evaluate_coeffs, hatano_nelson_bloch,
                    validate)
from nhtopo.model import BlochModel


def hn(omega0=0.0, t_c=1.0, phi=0.0, kappa=2.0, t_d=1.0, n_sites=3,
       statistics=Statistics.BOSONIC, boundary=Boundary.OPEN):
    return HatanoNelsonParams(omega0, t_c, phi, kappa, t_d, n_sites,
                              statistics, boundary)


class TestBuildHatanoNelson:
    def test_gain_profile_n3(self):
        m = build_hatano_nelson(hn())
        expected = np.array([[4, 2, 0], [2, 4, 2], [0, 2, 4]], dtype=complex)
        np.testing.assert_allclose(m.gamma_pump, expected)
        np.testing.assert_allclose(m.gamma_decay, 2.0 * np.eye(3))

    def test_hopping_orientation(self):
        phi = 0.83
        m = build_hatano_nelson(hn(omega0=0.5, phi=phi, n_sites=4))
        assert m.hamiltonian[0, 1] == pytest.approx(np.exp(1j * phi))
        assert m.hamiltonian[1, 0] == pytest.approx(np.exp(-1j * phi))
        np.testing.assert_allclose(np.diag(m.hamiltonian), 0.5)

    def test_zero_dissipative_hopping(self):
        m = build_hatano_nelson(hn(t_d=0.0))
        np.testing.assert_allclose(m.gamma_pump, 0.0)

    def test_local_gain_twice_nonlocal(self):
        rng = np.random.default_rng(7)
        for _ in range(10):
            m = build_hatano_nelson(
                hn(t_d=rng.uniform(0.1, 3.0), n_sites=rng.integers(3, 12)))
            gp = m.gamma_pump
            for j in range(m.n_sites - 1):
                assert gp[j, j] == pytest.approx(2.0 * gp[j, j + 1].real)
                assert gp[j + 1, j + 1] == pytest.approx(2.0 * gp[j + 1, j].real)

    def test_periodic_wraps_corners(self):
        m = build_hatano_nelson(hn(phi=0.3, n_sites=5,
                                   boundary=Boundary.PERIODIC))
        assert m.hamiltonian[4, 0] == pytest.approx(np.exp(1j * 0.3))
        assert m.hamiltonian[0, 4] == pytest.approx(np.exp(-1j * 0.3))
        assert m.gamma_pump[4, 0] == pytest.approx(2.0)
        m_open = build_hatano_nelson(hn(phi=0.3, n_sites=5))
        assert m_open.hamiltonian[4, 0] == 0.0
        assert m_open.gamma_pump[0, 4] == 0.0

    def test_rejects_bad_parameters(self):
        with pytest.raises(ValueError):
            hn(n_sites=1)
        with pytest.raises(ValueError):
            hn(kappa=-0.5)
        with pytest.raises(ValueError):
            hn(t_d=-1e-9)
        with pytest.raises(ValueError):
            hn(t_c=0.0)
        with pytest.raises(ValueError):
            hn(n_sites=2, boundary=Boundary.PERIODIC)

    def test_phi_reduced_mod_2pi(self):
        p = hn(phi=-np.pi / 2)
        assert p.phi == pytest.approx(3 * np.pi / 2)
        np.testing.assert_allclose(
            build_hatano_nelson(p).hamiltonian,
            build_hatano_nelson(hn(phi=-np.pi / 2 + 4 * np.pi)).hamiltonian)

    def test_matrices_read_only(self):
        m = build_hatano_nelson(hn())
        with pytest.raises(ValueError):
            m.hamiltonian[0, 0] = 99.0


class TestBloch:
    def test_dispersion_at_zero(self):
        b = hatano_nelson_bloch(hn(omega0=0.0, t_c=1.0, phi=0.0))
        assert complex(b.h_k(0.0)) == pytest.approx(2.0)

    def test_dispersion_matches_cos_k_minus_phi(self):
        p = hn(omega0=0.4, t_c=1.3, phi=1.1)
        b = hatano_nelson_bloch(p)
        ks = np.linspace(-np.pi, np.pi, 41)
        np.testing.assert_allclose(
            b.h_k(ks), 0.4 + 2 * 1.3 * np.cos(ks - 1.1), atol=1e-12)

    def test_pump_at_pi_and_zero(self):
        b = hatano_nelson_bloch(hn(t_d=1.0))
        assert abs(complex(b.gamma_pump_k(np.pi))) < 1e-12
        assert complex(b.gamma_pump_k(0.0)) == pytest.approx(8.0)

    def test_pump_is_8td_cos_squared(self):
        b = hatano_nelson_bloch(hn(t_d=0.7))
        ks = np.linspace(-np.pi, np.pi, 101)
        np.testing.assert_allclose(
            b.gamma_pump_k(ks).real, 8 * 0.7 * np.cos(ks / 2) ** 2, atol=1e-12)
        assert np.min(b.gamma_pump_k(ks).real) > -1e-12

    def test_bloch_matches_plane_wave_diagonalization(self):
        # Assemble the PBC matrices, evaluate them in the plane-wave basis
        # exp(-i k j)/sqrt(N) and compare with the coefficient maps.
        p = hn(omega0=0.2, t_c=0.9, phi=0.77, kappa=1.4, t_d=0.6, n_sites=12,
               boundary=Boundary.PERIODIC)
        m = build_hatano_nelson(p)
        b = hatano_nelson_bloch(p)
        n = p.n_sites
        j = np.arange(n)
        for mom in range(n):
            k = 2 * np.pi * mom / n
            w = np.exp(-1j * k * j) / np.sqrt(n)
            for mat, coeffs in ((m.hamiltonian, b.hopping_coeffs),
                                (m.gamma_decay, b.decay_coeffs),
                                (m.gamma_pump, b.pump_coeffs)):
                direct = w.conj() @ mat @ w
                assert abs(direct - evaluate_coeffs(coeffs, k)) < 1e-12

    def test_hermiticity_enforced(self):
        with pytest.raises(ValueError):
            BlochModel(hopping_coeffs={-1: 1.0 + 0.5j, 1: 1.0 + 0.5j},
                       decay_coeffs={0: 1.0}, pump_coeffs={0: 0.0},
                       statistics=Statistics.BOSONIC)

    def test_pump_positivity_enforced(self):
        with pytest.raises(ValueError):
            BlochModel(hopping_coeffs={0: 0.0}, decay_coeffs={0: 1.0},
                       pump_coeffs={-1: 2.0, 0: 1.0, 1: 2.0},
                       statistics=Statistics.BOSONIC)


class TestValidate:
    def test_constructed_models_pass(self):
        rng = np.random.default_rng(3)
        for _ in range(5):
            p = hn(omega0=rng.normal(), t_c=rng.uniform(0.2, 2),
                   phi=rng.uniform(0, 7), kappa=rng.uniform(0, 5),
                   t_d=rng.uniform(0, 2), n_sites=int(rng.integers(2, 9)))
            assert validate(build_hatano_nelson(p)).passed

    def test_indefinite_pump_fails(self):
        # eigenvalues of [[1, 2], [2, 1]] are 3 and -1
        m = ModelSpec(2, np.zeros((2, 2)), np.eye(2),
                      np.array([[1.0, 2.0], [2.0, 1.0]]),
                      Statistics.BOSONIC, Boundary.OPEN)
        report = validate(m)
        assert not report.passed
        assert report.min_eigenvalues["gamma_pump"] == pytest.approx(-1.0)

    def test_non_hermitian_hamiltonian_fails(self):
        m = ModelSpec(2, np.array([[0.0, 1.0], [0.5, 0.0]]), np.eye(2),
                      np.zeros((2, 2)), Statistics.BOSONIC, Boundary.OPEN)
        report = validate(m)
        assert not report.passed
        assert report.hermiticity_residuals["hamiltonian"] > 1e-10

    def test_statistics_eta(self):
        assert Statistics.BOSONIC.eta == 1
        assert Statistics.FERMIONIC.eta == -1
