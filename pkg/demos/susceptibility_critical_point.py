"""Detecting the topological transition from local response functions.

A static frequency shift at the upstream site changes the occupation
spectrum everywhere downstream.  Inside the amplifying window the response
grows exponentially with distance, outside it decays, so the
log-susceptibility curves of different probe sites cross at the critical
frequency.  A joint linear fit extracts that crossing; it lands on the
analytic window edge to about a percent even for a 10-site chain.
"""

import pathlib
import warnings

import numpy as np

from nhtopo import (HatanoNelsonParams, MarginalStabilityWarning,
                    build_hatano_nelson, critical_point, susceptibility_map)

OUT = pathlib.Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

# Amplification running from site 1 towards site N selects this gauge sign.
PHI_FWD = -np.pi / 2
PROBES = [1, 3, 5, 7, 9]  # 0-based; sites 2, 4, ... 10 of the chain


def window_edge(kappa, t_c=1.0, t_d=1.0):
    ratio = (kappa / 2 - 2 * t_d) / (2 * t_d)
    return 2 * t_c * np.sqrt(1 - ratio**2)


def main():
    warnings.simplefilter("ignore", MarginalStabilityWarning)
    rows = ["kappa,omega,site,chi"]
    for kappa in (4.0, 7.0):
        model = build_hatano_nelson(
            HatanoNelsonParams(0.0, 1.0, PHI_FWD, kappa, 1.0, 10))
        target = window_edge(kappa)
        omegas = np.linspace(target - 0.5, target + 0.5, 41)
        smap = susceptibility_map(model, omegas, 0, sites=PROBES)
        for i, site in enumerate(PROBES):
            for w, chi in zip(omegas, smap.values[i]):
                rows.append(f"{kappa},{w:.6f},{site + 1},{chi:.10e}")
        fit = critical_point(model, omegas, 0, PROBES)
        print(f"kappa/t_d = {kappa:g}: fitted critical frequency "
              f"beta = {fit.beta:.4f} (window edge {target:.4f}, "
              f"deviation {abs(fit.beta - target) / target:.1%})")
        print(f"  per-site slopes: "
              + ", ".join(f"{x:.2f}" for x in fit.slopes)
              + f"; rms residual {fit.residual:.3f}")
    (OUT / "susceptibility.csv").write_text("\n".join(rows) + "\n")
    print(f"\ncurves written to {OUT / 'susceptibility.csv'}")

    try:
        import matplotlib.pyplot as plt
    except ImportError:
        return
    fig, axes = plt.subplots(1, 2, figsize=(10, 4), sharey=True)
    for ax, kappa in zip(axes, (4.0, 7.0)):
        model = build_hatano_nelson(
            HatanoNelsonParams(0.0, 1.0, PHI_FWD, kappa, 1.0, 10))
        target = window_edge(kappa)
        omegas = np.linspace(target - 0.5, target + 0.5, 41)
        smap = susceptibility_map(model, omegas, 0, sites=PROBES)
        for i, site in enumerate(PROBES):
            ax.semilogy(omegas, np.abs(smap.values[i]),
                        label=f"site {site + 1}")
        ax.axvline(target, color="k", ls="--", lw=1)
        ax.set_title(f"$\\kappa/t_d$ = {kappa:g}")
        ax.set_xlabel("$\\omega$")
    axes[0].set_ylabel("$|\\chi_{j,1}(\\omega)|$")
    axes[0].legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(OUT / "susceptibility_crossings.png", dpi=150)
    print(f"figure written to {OUT / 'susceptibility_crossings.png'}")


if __name__ == "__main__":
    main()
