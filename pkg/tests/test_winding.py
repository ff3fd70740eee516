import numpy as np
import pytest

from nhtopo import (Boundary, CriticalPoint, HatanoNelsonParams, Statistics,
                    bloch_h_r, hatano_nelson_bloch, phase_diagram,
                    point_gap_loop, winding_analytic, winding_curve,
                    winding_numerical)

from conftest import PHI


def hn(kappa=4.0, t_d=1.0, t_c=1.0, phi=PHI, omega0=0.0, n=8,
       statistics=Statistics.BOSONIC):
    return HatanoNelsonParams(omega0, t_c, phi, kappa, t_d, n, statistics,
                              Boundary.OPEN)


def random_params(rng):
    return hn(kappa=float(rng.uniform(0.1, 12.0)),
              t_d=float(rng.uniform(0.0, 2.0)),
              t_c=float(rng.uniform(0.2, 2.0)),
              phi=float(rng.uniform(0.0, 2 * np.pi)),
              omega0=float(rng.normal(scale=0.5)))


class TestWindingNumerical:
    def test_topological_reference(self, fig_params):
        res = winding_numerical(hatano_nelson_bloch(fig_params), 0.0)
        assert res.w1 == 1
        assert res.gap == pytest.approx(2.0, abs=1e-6)

    def test_outside_the_loop(self, fig_params):
        res = winding_numerical(hatano_nelson_bloch(fig_params), 3.0)
        assert res.w1 == 0
        assert res.gap == pytest.approx(1.0, abs=1e-6)

    def test_critical_frequency_raises(self, fig_params):
        with pytest.raises(CriticalPoint):
            winding_numerical(hatano_nelson_bloch(fig_params), 2.0)

    def test_fermionic_always_zero(self):
        rng = np.random.default_rng(31)
        for _ in range(20):
            p = random_params(rng)
            if p.kappa < 1e-3:
                continue
            pf = hn(kappa=p.kappa, t_d=p.t_d, t_c=p.t_c, phi=p.phi,
                    omega0=p.omega0, statistics=Statistics.FERMIONIC)
            w = float(rng.uniform(-4, 4))
            assert winding_numerical(hatano_nelson_bloch(pf), w).w1 == 0

    def test_grid_independence(self, fig_params):
        bloch = hatano_nelson_bloch(fig_params)
        for w in (-1.5, 0.3, 1.9, 2.1, 3.5):
            r512 = winding_numerical(bloch, w, n_k=512)
            r1024 = winding_numerical(bloch, w, n_k=1024)
            assert r512.w1 == r1024.w1

    def test_small_grid_rejected(self, fig_params):
        with pytest.raises(ValueError):
            winding_numerical(hatano_nelson_bloch(fig_params), 0.0, n_k=32)

    def test_zero_outside_hull(self):
        rng = np.random.default_rng(32)
        for _ in range(10):
            p = random_params(rng)
            bloch = hatano_nelson_bloch(p)
            ks = np.linspace(-np.pi, np.pi, 512)
            hull = np.max(np.abs(bloch_h_r(bloch, ks)))
            assert winding_numerical(bloch, hull * 1.5 + 1.0).w1 == 0


class TestWindingAnalytic:
    def test_reference_values(self, fig_params):
        assert winding_analytic(fig_params, 0.0) == 1
        assert winding_analytic(fig_params, 2.5) == 0

    def test_window_boundary_kappa7(self):
        # phi = pi/2, t_c = t_d family: the window edge sits at
        # 2 t_c sqrt(1 - ((kappa/2 - 2 t_d) / (2 t_d))^2).
        p = hn(kappa=7.0)
        omega_c = 2.0 * np.sqrt(1.0 - 0.75 ** 2)
        assert winding_analytic(p, omega_c - 1e-3) == 1
        assert winding_analytic(p, omega_c + 1e-3) == 0

    def test_agrees_with_numerical_on_random_samples(self):
        rng = np.random.default_rng(33)
        checked = 0
        while checked < 100:
            p = random_params(rng)
            bloch = hatano_nelson_bloch(p)
            w = float(rng.uniform(-5, 5))
            ks = np.linspace(-np.pi, np.pi, 1025)
            gap = np.min(np.abs(w - bloch_h_r(bloch, ks)))
            if gap <= 1e-3:
                continue
            assert winding_analytic(p, w) == winding_numerical(bloch, w).w1
            checked += 1

    def test_critical_root_raises(self, fig_params):
        with pytest.raises(CriticalPoint):
            winding_analytic(fig_params, 2.0)


class TestPointGapLoop:
    def test_bosonic_encircles_origin(self, fig_params):
        loop = point_gap_loop(hatano_nelson_bloch(fig_params), probes=[0.0])
        assert abs(loop.windings[0]) == 1

    def test_fermionic_never_encircles_origin(self):
        rng = np.random.default_rng(34)
        for _ in range(10):
            p = random_params(rng)
            if p.kappa < 1e-2:
                continue
            pf = hn(kappa=p.kappa, t_d=p.t_d, t_c=p.t_c, phi=p.phi,
                    omega0=p.omega0, statistics=Statistics.FERMIONIC)
            loop = point_gap_loop(hatano_nelson_bloch(pf),
                                  probes=[0.0, pf.omega0])
            assert loop.windings == [0, 0]

    def test_far_probe_zero(self, fig_params):
        bloch = hatano_nelson_bloch(fig_params)
        scale = 10 * sum(abs(c) for c in bloch.hopping_coeffs.values())
        loop = point_gap_loop(bloch, probes=[scale + 10.0])
        assert loop.windings[0] == 0

    def test_loop_closes(self, fig_params):
        loop = point_gap_loop(hatano_nelson_bloch(fig_params), n_k=256)
        assert abs(loop.loci[0] - loop.loci[-1]) < 1e-12

    def test_probe_on_loop_flagged(self, fig_params):
        # 2i e^{-ik} passes through 2 + 0j exactly at k = pi/2.
        loop = point_gap_loop(hatano_nelson_bloch(fig_params), n_k=1024,
                              probes=[2.0 + 0.0j])
        assert loop.flagged == [True]
        assert loop.windings == [None]

    def test_orientation_relation_to_w1(self):
        # Loop winding about a real probe equals -W1 at that frequency; fix
        # the relation once here and rely on it globally.
        rng = np.random.default_rng(35)
        checked = 0
        while checked < 25:
            p = random_params(rng)
            bloch = hatano_nelson_bloch(p)
            w = float(rng.uniform(-4, 4))
            try:
                res = winding_numerical(bloch, w)
            except CriticalPoint:
                continue
            loop = point_gap_loop(bloch, probes=[w])
            assert loop.windings[0] == -res.w1
            checked += 1


class TestPhaseDiagram:
    def test_on_resonance_window_in_kappa(self):
        # At omega = omega0 the phase is topological exactly for
        # 0 < kappa < 8 t_d.
        params = hn()
        kappas = np.array([0.5, 2.0, 6.0, 7.9, 8.1, 10.0, 12.0])
        diag = phase_diagram(params, np.array([0.0]), kappas, n_k=512)
        expect = (kappas < 8.0).astype(int)
        np.testing.assert_array_equal(np.abs(diag.w1[:, 0]), expect)
        assert not diag.critical.any()

    def test_gap_closure_cell_flagged(self):
        params = hn()
        diag = phase_diagram(params, np.array([0.0]), np.array([8.0]),
                             n_k=512)
        assert diag.critical[0, 0]

    def test_fermionic_all_trivial(self):
        params = hn(statistics=Statistics.FERMIONIC)
        diag = phase_diagram(params, np.linspace(-3, 3, 7),
                             np.linspace(0.5, 12, 6), n_k=256)
        assert not diag.w1.any()
        assert not diag.critical.any()


class TestWindingCurve:
    def test_flags_instead_of_raising(self, fig_params):
        bloch = hatano_nelson_bloch(fig_params)
        curve = winding_curve(bloch, np.linspace(-3, 3, 25), n_k=512)
        crit = curve.omegas[curve.critical]
        np.testing.assert_allclose(crit, [-2.0, 2.0])
        inside = (np.abs(curve.omegas) < 2) & ~curve.critical
        outside = (np.abs(curve.omegas) > 2) & ~curve.critical
        assert np.all(curve.w1[inside] == 1)
        assert np.all(curve.w1[outside] == 0)
        assert curve.w1.dtype.kind == "i"
