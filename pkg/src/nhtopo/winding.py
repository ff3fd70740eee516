"""Frequency-dependent winding numbers of the Bloch curve H_R(k).

Two independent evaluation routes:

* numerical: accumulate the wrapped phase increments of omega - H_R(k)
  around the Brillouin zone;
* analytic (nearest-neighbor chains): write z = exp(i k), multiply
  omega - H_R(z) by z to obtain a quadratic polynomial, and count its
  roots inside the unit circle.

Orientation convention: the reported winding W1 is minus the
counterclockwise winding of omega - H_R(k) over k in [-pi, pi), which makes
the topological (amplifying) phase of the bosonic dissipative chain report
W1 = +1.  The analytic count uses the same convention:
W1 = 1 - (#roots inside the unit circle).

The raw geometric winding of the eigenvalue loop about a probe point, as
returned by :func:`point_gap_loop`, is counterclockwise-positive and hence
equals -W1 when the probe is the real frequency omega.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CriticalPoint
from .keldysh import bloch_h_r
from .model import BlochModel, HatanoNelsonParams, hatano_nelson_bloch

__all__ = [
    "WindingResult",
    "WindingCurve",
    "PointGapLoop",
    "PhaseDiagram",
    "winding_numerical",
    "winding_curve",
    "winding_analytic",
    "point_gap_loop",
    "phase_diagram",
]

#: Gap (distance of the probe from the Bloch curve) below which the winding
#: is treated as undefined; also the tolerance on |root| - 1 in the
#: analytic route.
CRITICAL_TOL = 1e-8


@dataclass(frozen=True)
class WindingResult:
    w1: int
    gap: float


@dataclass(frozen=True)
class WindingCurve:
    """W1 over a frequency grid with the per-point gap and critical flags."""

    omegas: np.ndarray
    w1: np.ndarray
    gap: np.ndarray
    critical: np.ndarray


@dataclass(frozen=True)
class PointGapLoop:
    """Sampled eigenvalue loop H_R(k) and its winding about probe points."""

    k_grid: np.ndarray
    loci: np.ndarray
    probes: list
    windings: list
    flagged: list


@dataclass
class PhaseDiagram:
    """Integer winding over an (omega, kappa) grid with critical cells marked."""

    omegas: np.ndarray
    kappas: np.ndarray
    w1: np.ndarray
    critical: np.ndarray


def _closed_curve(bloch: BlochModel, n_k: int) -> np.ndarray:
    ks = -np.pi + 2.0 * np.pi * np.arange(n_k + 1) / n_k
    return bloch_h_r(bloch, ks)


def _phase_winding(values: np.ndarray) -> float:
    """Total accumulated phase / 2pi of a closed complex curve, each
    increment wrapped to (-pi, pi]."""
    inc = np.angle(values[1:] * np.conj(values[:-1]))
    return float(np.sum(inc) / (2.0 * np.pi))


def winding_numerical(bloch: BlochModel, omega: float,
                      n_k: int = 1024) -> WindingResult:
    """Winding number of the Bloch curve about a real probe frequency.

    The phase of omega - H_R(k) is accumulated over a uniform periodic
    k-grid and the result is checked against one grid refinement; the
    integer is grid-independent away from criticality.

    Raises
    ------
    CriticalPoint
        If the curve passes within ``CRITICAL_TOL`` of omega, or the
        refinement check disagrees (unresolvably close to a gap closure).
    """
    if n_k < 64:
        raise ValueError("n_k must be at least 64")

    def once(nk):
        f = omega - _closed_curve(bloch, nk)
        gap = float(np.min(np.abs(f)))
        if gap < CRITICAL_TOL:
            raise CriticalPoint(
                f"gap {gap:.3e} at omega = {omega:g}: winding undefined")
        total = _phase_winding(f)
        w = int(np.rint(-total))
        if abs(-total - w) > 0.25:
            raise CriticalPoint(
                f"phase accumulation {total:.3f} not close to an integer at "
                f"omega = {omega:g}; refine the grid")
        return w, gap

    w1, gap = once(n_k)
    w1_fine, gap_fine = once(2 * n_k)
    if w1_fine != w1:
        raise CriticalPoint(
            f"winding at omega = {omega:g} changed under grid refinement "
            f"({w1} -> {w1_fine}); too close to a critical point")
    return WindingResult(w1=w1, gap=min(gap, gap_fine))


def winding_curve(bloch: BlochModel, omegas, n_k: int = 1024) -> WindingCurve:
    """Evaluate :func:`winding_numerical` over a grid, flagging critical points
    instead of raising."""
    omegas = np.asarray(omegas, dtype=float)
    w1 = np.zeros(omegas.size, dtype=int)
    gap = np.zeros(omegas.size)
    critical = np.zeros(omegas.size, dtype=bool)
    curve = _closed_curve(bloch, n_k)
    for i, w in enumerate(omegas):
        gap[i] = float(np.min(np.abs(w - curve)))
        try:
            res = winding_numerical(bloch, float(w), n_k)
            w1[i] = res.w1
            gap[i] = res.gap
        except CriticalPoint:
            critical[i] = True
    return WindingCurve(omegas=omegas, w1=w1, gap=gap, critical=critical)


def winding_analytic(params: HatanoNelsonParams, omega: float) -> int:
    """Winding number of the nearest-neighbor chain by root counting.

    z * (omega - H_R(z)) is at most quadratic; W1 equals one minus the
    number of its roots inside the unit circle (the one compensates the
    simple pole of the Laurent polynomial at z = 0).

    Raises
    ------
    CriticalPoint
        If a root lies on the unit circle within 1e-10.
    """
    t_plus = params.t_c * np.exp(1j * params.phi) + 1j * params.t_d
    t_minus = params.t_c * np.exp(-1j * params.phi) + 1j * params.t_d
    alpha = 2.0 * params.t_d - 0.5 * params.kappa - 1j * (params.omega0 - omega)
    # p(z) = z * (omega - H_R(z)) = -t_minus z^2 - i alpha z - t_plus
    coeffs = np.array([-t_minus, -1j * alpha, -t_plus])
    lead = np.max(np.abs(coeffs))
    if lead == 0.0:
        raise CriticalPoint("degenerate chain: omega - H_R vanishes identically")
    trimmed = np.trim_zeros(coeffs, "f")
    if trimmed.size <= 1:
        roots = np.array([])
    else:
        roots = np.roots(trimmed)  # companion-matrix eigenvalues
    mods = np.abs(roots)
    if np.any(np.abs(mods - 1.0) < 1e-10):
        raise CriticalPoint(
            f"root on the unit circle at omega = {omega:g}: gap closure")
    return 1 - int(np.sum(mods < 1.0))


def point_gap_loop(bloch: BlochModel, n_k: int = 1024,
                   probes=(0.0,)) -> PointGapLoop:
    """Sample the eigenvalue loop H_R(k) and wind it about probe points.

    The reported winding is the raw counterclockwise winding of the loop.
    Probes closer than ``CRITICAL_TOL`` to the loop are flagged and get a
    ``None`` winding instead of an integer.
    """
    ks = -np.pi + 2.0 * np.pi * np.arange(n_k + 1) / n_k
    loci = bloch_h_r(bloch, ks)
    windings = []
    flagged = []
    for probe in probes:
        rel = loci - complex(probe)
        if float(np.min(np.abs(rel))) < CRITICAL_TOL:
            windings.append(None)
            flagged.append(True)
            continue
        windings.append(int(np.rint(_phase_winding(rel))))
        flagged.append(False)
    return PointGapLoop(k_grid=ks, loci=loci, probes=list(probes),
                        windings=windings, flagged=flagged)


def phase_diagram(params: HatanoNelsonParams, omegas, kappas,
                  n_k: int = 1024) -> PhaseDiagram:
    """W1 over an (omega, kappa) grid for a fixed chain family.

    Rows follow ``kappas``, columns ``omegas``.  Cells where the winding is
    undefined are marked critical and left at 0.
    """
    from dataclasses import replace

    omegas = np.asarray(omegas, dtype=float)
    kappas = np.asarray(kappas, dtype=float)
    w1 = np.zeros((kappas.size, omegas.size), dtype=int)
    critical = np.zeros((kappas.size, omegas.size), dtype=bool)
    for i, kap in enumerate(kappas):
        bloch = hatano_nelson_bloch(replace(params, kappa=float(kap)))
        curve = winding_curve(bloch, omegas, n_k)
        w1[i] = curve.w1
        critical[i] = curve.critical
    return PhaseDiagram(omegas=omegas, kappas=kappas, w1=w1, critical=critical)
