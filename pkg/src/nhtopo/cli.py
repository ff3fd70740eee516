"""Command-line front end emitting figure-ready CSV/JSON tables.

Grammar::

    nhtopo <loop|winding|spectrum|susceptibility|validate>
           --config <path> [--out <path>] [--format csv|json] [--threads N]

The thread count falls back to the ``NHTOPO_THREADS`` environment variable.
Runs are deterministic: identical configs produce byte-identical output
regardless of the thread count.  The exit code is 0 iff no per-row error
flag was raised; otherwise a machine-readable summary goes to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace

import numpy as np

from . import __version__
from .configio import load_config, resolve_model
from .doubled import (greens_from_svd, singular_spectrum, spectral_flow,
                      spectral_flow_bloch, spectral_flow_k)
from .errors import ConfigError, NhtopoError, NoCrossing, SingularAtFrequency
from .keldysh import (blocks_real_space, correlation_matrix, greens,
                      integrate_correlation, stability)
from .model import Boundary, build_hatano_nelson, hatano_nelson_bloch, validate
from .oracles import (fock_lindblad_steady_state, moment_ode_steady_state,
                      regression_spectrum)
from .response import critical_point, susceptibility_map
from .tables import Table, format_value
from .winding import point_gap_loop, winding_curve

__all__ = ["main"]

_DEFAULTS = {
    "omega_min": -3.0,
    "omega_max": 3.0,
    "omega_steps": 121,
    "k_steps": 256,
    "obc_modes": 4,
    "probes": [0.0],
    "source_site": 1,
    "cutoff": 6,
}


def _omega_grid(cfg: dict) -> np.ndarray:
    lo = float(cfg["omega_min"])
    hi = float(cfg["omega_max"])
    steps = int(cfg["omega_steps"])
    if steps < 2:
        raise ConfigError("omega_steps must be at least 2")
    if not hi > lo:
        raise ConfigError("omega_max must exceed omega_min")
    return np.linspace(lo, hi, steps)


def _merged(cfg: dict, keys) -> dict:
    out = dict(cfg)
    for key in keys:
        out.setdefault(key, _DEFAULTS[key])
    return out


def _as_list(value) -> list:
    return value if isinstance(value, list) else [value]


def _ordered_map(fn, items, threads: int):
    if threads <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _require_params(params, command):
    if params is None:
        raise ConfigError(
            f"'{command}' needs chain parameters (omega0, t_c, ...); generic "
            "matrix models have no momentum-space form")
    return params


def _new_table(command: str, cfg: dict) -> Table:
    return Table(command=command, version=__version__, config=cfg)


# ---------------------------------------------------------------------------
# commands


def cmd_loop(cfg: dict, threads: int) -> tuple[Table, list]:
    cfg = _merged(cfg, ("k_steps", "probes"))
    model, params = resolve_model(cfg)
    params = _require_params(params, "loop")
    bloch = hatano_nelson_bloch(params)
    flags = []

    table = _new_table("loop", cfg)
    probes = [complex(p) for p in _as_list(cfg["probes"])]
    loop = point_gap_loop(bloch, n_k=int(cfg["k_steps"]), probes=probes)

    sec = table.section("pbc_loop", ["k", "re", "im"])
    for k, z in zip(loop.k_grid, loop.loci):
        sec.add(float(k), float(z.real), float(z.imag))

    obc = build_hatano_nelson(replace(params, boundary=Boundary.OPEN))
    lam = np.linalg.eigvals(blocks_real_space(obc).h_r)
    order = np.lexsort((lam.imag, lam.real))
    sec = table.section("obc_eigenvalues", ["index", "re", "im"])
    for i, z in enumerate(lam[order]):
        sec.add(i, float(z.real), float(z.imag))

    sec = table.section("probes", ["probe_re", "probe_im", "winding", "flag"])
    for probe, w, bad in zip(loop.probes, loop.windings, loop.flagged):
        flag = "on_loop" if bad else ""
        if bad:
            flags.append({"section": "probes", "probe": [probe.real,
                                                         probe.imag],
                          "flag": flag})
        sec.add(float(probe.real), float(probe.imag), w, flag)
    return table, flags


def cmd_winding(cfg: dict, threads: int) -> tuple[Table, list]:
    cfg = _merged(cfg, ("omega_min", "omega_max", "omega_steps", "k_steps"))
    model, params = resolve_model(cfg)
    params = _require_params(params, "winding")
    omegas = _omega_grid(cfg)
    kappas = [float(k) for k in _as_list(cfg.get("kappas", [params.kappa]))]
    n_k = max(64, int(cfg["k_steps"]))
    flags = []

    table = _new_table("winding", cfg)
    for kap in kappas:
        bloch = hatano_nelson_bloch(replace(params, kappa=kap))
        chunks = np.array_split(omegas, max(1, threads))
        parts = _ordered_map(lambda ws: winding_curve(bloch, ws, n_k),
                             [w for w in chunks if w.size], threads)
        sec = table.section(f"winding kappa={format_value(kap)}",
                            ["omega", "w1", "gap", "flag"])
        for part in parts:
            for w, w1, gap, crit in zip(part.omegas, part.w1, part.gap,
                                        part.critical):
                flag = "critical" if crit else ""
                if crit:
                    flags.append({"section": sec.name, "omega": float(w),
                                  "flag": flag})
                sec.add(float(w), int(w1), float(gap), flag)
    return table, flags


def cmd_spectrum(cfg: dict, threads: int) -> tuple[Table, list]:
    cfg = _merged(cfg, ("omega_min", "omega_max", "omega_steps", "k_steps",
                        "obc_modes"))
    cfg.setdefault("omega_fixed", 0.5 * (float(cfg["omega_min"])
                                         + float(cfg["omega_max"])))
    model, params = resolve_model(cfg)
    omegas = _omega_grid(cfg)
    n_k = int(cfg["k_steps"])
    n_modes = min(int(cfg["obc_modes"]), model.n_sites)

    table = _new_table("spectrum", cfg)
    if params is not None:
        bloch = hatano_nelson_bloch(params)
        ks, _ = spectral_flow_k(bloch, 0.0, n_k)
        bands = spectral_flow_bloch(bloch, omegas, n_k)
        sec = table.section("pbc_vs_omega", ["omega", "k", "epsilon"])
        for i, w in enumerate(omegas):
            for k, e in zip(ks, bands[i]):
                sec.add(float(w), float(k), float(e))

    obc = model
    if model.boundary is not Boundary.OPEN and params is not None:
        obc = build_hatano_nelson(replace(params, boundary=Boundary.OPEN))
    chunks = np.array_split(omegas, max(1, threads))
    parts = _ordered_map(lambda ws: spectral_flow(obc, ws),
                         [w for w in chunks if w.size], threads)
    eps_obc = np.vstack(parts)
    sec = table.section("obc_vs_omega", ["omega", "index", "epsilon"])
    for i, w in enumerate(omegas):
        for m in range(n_modes):
            sec.add(float(w), m, float(eps_obc[i, m]))

    if params is not None:
        bloch = hatano_nelson_bloch(params)
        ks, eps = spectral_flow_k(bloch, float(cfg["omega_fixed"]), n_k)
        sec = table.section("vs_k", ["k", "epsilon"])
        for k, e in zip(ks, eps):
            sec.add(float(k), float(e))
    return table, []


def cmd_susceptibility(cfg: dict, threads: int) -> tuple[Table, list]:
    cfg = _merged(cfg, ("omega_min", "omega_max", "omega_steps",
                        "source_site"))
    model, _ = resolve_model(cfg)
    omegas = _omega_grid(cfg)
    source = int(cfg["source_site"])  # 1-based in files
    if not 1 <= source <= model.n_sites:
        raise ConfigError(f"source_site must be in 1..{model.n_sites}")
    probe_sites = [int(s) for s in _as_list(
        cfg.get("probe_sites", [s for s in range(1, model.n_sites + 1)
                                if s != source]))]
    for site in probe_sites:
        if not 1 <= site <= model.n_sites:
            raise ConfigError(f"probe site {site} outside 1..{model.n_sites}")
    cfg["probe_sites"] = probe_sites
    flags = []

    table = _new_table("susceptibility", cfg)
    smap = susceptibility_map(model, omegas, source - 1,
                              sites=[s - 1 for s in probe_sites])
    sec = table.section("chi", ["omega", "site", "chi", "log_abs_chi"])
    for i, site in enumerate(probe_sites):
        for m, w in enumerate(omegas):
            chi = float(smap.values[i, m])
            log_abs = float(np.log(abs(chi))) if chi != 0.0 else None
            sec.add(float(w), site, chi, log_abs)

    try:
        fit = critical_point(model, omegas, source - 1,
                             [s - 1 for s in probe_sites])
        table.notes["fit"] = {
            "alpha": float("%.12g" % fit.alpha),
            "beta": float("%.12g" % fit.beta),
            "slopes": {str(site): float("%.12g" % x)
                       for site, x in zip(probe_sites, fit.slopes)},
            "residual": float("%.12g" % fit.residual),
            "beta_in_window": fit.beta_in_window,
        }
        if not fit.beta_in_window:
            flags.append({"section": "fit", "flag": "beta_outside_window",
                          "beta": float("%.12g" % fit.beta)})
    except NoCrossing as exc:
        table.notes["fit"] = {"error": "no_crossing", "detail": str(exc)}
        flags.append({"section": "fit", "flag": "no_crossing"})
    return table, flags


def _sample_frequencies(model) -> list:
    """A few deterministic probe frequencies away from the H_R spectrum."""
    blocks = blocks_real_space(model)
    scale = float(np.linalg.norm(blocks.h_r, 2))
    candidates = [0.37 * scale + 0.11, -0.53 * scale - 0.07, 1.31 * scale + 0.23]
    good = []
    for w in candidates:
        try:
            greens(blocks, w)
            good.append(w)
        except SingularAtFrequency:
            good.append(w + 0.317)
    return good


def cmd_validate(cfg: dict, threads: int) -> tuple[Table, list]:
    cfg = _merged(cfg, ("cutoff",))
    model, params = resolve_model(cfg)
    flags = []
    table = _new_table("validate", cfg)
    sec = table.section("checks",
                        ["check", "status", "value", "tolerance", "detail"])

    def row(check, ok, value, tol, detail=""):
        status = "pass" if ok else "fail"
        if not ok:
            flags.append({"section": "checks", "check": check,
                          "flag": status})
        sec.add(check, status, value, tol, detail)

    report = validate(model)
    worst = max(report.hermiticity_residuals.values())
    row("model_hermiticity", worst <= report.tolerance, worst,
        report.tolerance)
    worst_eig = min(report.min_eigenvalues.values())
    row("rates_psd", worst_eig >= -report.tolerance, worst_eig,
        -report.tolerance, "; ".join(report.failures))

    rep = stability(model)
    if rep.stable:
        sec.add("stability", "pass", rep.max_im, -1e-12, "stable")
    elif rep.max_im <= 1e-9:
        sec.add("stability", "pass", rep.max_im, -1e-12, "marginal")
    else:
        sec.add("stability", "unstable", rep.max_im, -1e-12, "")
        flags.append({"section": "checks", "check": "stability",
                      "flag": "unstable"})

    blocks = blocks_real_space(model)
    eye = np.eye(model.n_sites)
    for w in _sample_frequencies(model):
        g = greens(blocks, w)
        res = float(np.max(np.abs((w * eye - blocks.h_r) @ g.g_r - eye)))
        row(f"greens_identity omega={format_value(w)}", res < 1e-10, res,
            1e-10)
        m = correlation_matrix(model, w)
        herm = float(np.max(np.abs(m - m.conj().T)))
        psd = float(np.min(np.linalg.eigvalsh(0.5 * (m + m.conj().T))))
        row(f"correlation_hermitian omega={format_value(w)}",
            herm < 1e-10 * max(1.0, float(np.max(np.abs(m)))), herm, 1e-10)
        row(f"correlation_psd omega={format_value(w)}",
            psd > -1e-10 * max(1.0, float(np.max(np.abs(m)))), psd, -1e-10)
        spec = singular_spectrum(blocks, w)
        res_svd = float(np.max(np.abs(greens_from_svd(spec) - g.g_r)))
        scale = float(np.max(np.abs(g.g_r)))
        row(f"svd_identity omega={format_value(w)}",
            res_svd < 1e-10 * max(1.0, scale), res_svd, 1e-10)

    stable = rep.stable or rep.max_im <= 1e-9
    if rep.stable:
        cov = moment_ode_steady_state(model).covariance
        integral = integrate_correlation(model)
        diff = float(np.max(np.abs(cov - integral)))
        row("sum_rule", diff < 1e-6, diff, 1e-6,
            "frequency integral of M vs moment-ODE covariance")

        span = float(np.max(np.abs(np.linalg.eigvals(blocks.h_r)))) + 1.0
        grid = np.linspace(-span, span, 41)
        j, l = 0, model.n_sites - 1
        reg = regression_spectrum(model, j, l, grid)
        direct = np.array([correlation_matrix(model, w)[j, l] for w in grid])
        # Tolerance scales with the steady covariance, the natural magnitude
        # of the two-time function being transformed.
        tol = 1e-4 * max(1.0, float(np.max(np.abs(cov))))
        diff = float(np.max(np.abs(reg - direct)))
        row("regression_spectrum", diff < tol, diff, tol,
            f"entry ({j}, {l}) over {grid.size} frequencies")

        if model.n_sites == 1:
            p = float(model.gamma_pump[0, 0].real)
            kap = float(model.gamma_decay[0, 0].real)
            eta = model.statistics.eta
            expected = p / (kap - eta * p)
            got = float(cov[0, 0].real)
            row("single_site_occupation", abs(got - expected) < 1e-8,
                got, 1e-8, f"rate-equation value {format_value(expected)}")

        if model.n_sites <= 3:
            fock = fock_lindblad_steady_state(model, cutoff=int(cfg["cutoff"]))
            scale = max(float(np.max(np.abs(cov))), 1e-12)
            diff = float(np.max(np.abs(fock.covariance - cov))) / scale
            row("fock_oracle", diff < 0.02, diff, 0.02,
                "truncated-Fock steady state vs moment ODE")
    elif not stable:
        for name in ("sum_rule", "regression_spectrum", "fock_oracle"):
            sec.add(name, "skipped", None, None, "model unstable")
    return table, flags


_COMMANDS = {
    "loop": cmd_loop,
    "winding": cmd_winding,
    "spectrum": cmd_spectrum,
    "susceptibility": cmd_susceptibility,
    "validate": cmd_validate,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nhtopo",
        description="Topology and response of quadratic open quantum lattices")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        cmd = sub.add_parser(name)
        cmd.add_argument("--config", required=True,
                         help="run configuration file (key=value or JSON)")
        cmd.add_argument("--out", default=None, help="output path")
        cmd.add_argument("--format", choices=("csv", "json"), default="csv")
        cmd.add_argument("--threads", type=int, default=None)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    threads = args.threads
    if threads is None:
        threads = int(os.environ.get("NHTOPO_THREADS", "1"))
    out = args.out or f"{args.command}.{args.format}"

    try:
        cfg = load_config(args.config)
        table, flags = _COMMANDS[args.command](cfg, max(1, threads))
    except (ConfigError, NhtopoError) as exc:
        json.dump({"command": args.command, "error": type(exc).__name__,
                   "detail": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return 2

    table.write(out, args.format)
    if flags:
        json.dump({"command": args.command, "out": out, "flags": flags},
                  sys.stderr)
        sys.stderr.write("\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
