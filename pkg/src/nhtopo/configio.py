"""Run-configuration and model-file parsing.

Two accepted formats:

* a human-readable key-value file (``key = value`` per line, ``#`` comments)
  carrying Hatano-Nelson parameters (``omega0, t_c, phi, kappa, t_d,
  n_sites, statistics, boundary``) plus command-specific grid keys;
* a JSON object with the same scalar keys, or with a generic model under
  ``"model"`` given as three complex matrices (entries encoded as
  ``[re, im]`` pairs) plus ``statistics`` and ``boundary``.

Site indices appearing in files (``source_site``, ``probe_sites``) are
1-based to match the printed-figure conventions; the Python API is 0-based.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .model import (Boundary, HatanoNelsonParams, ModelSpec, Statistics,
                    build_hatano_nelson)

__all__ = [
    "load_config",
    "resolve_model",
    "resolve_hn_params",
    "model_to_jsonable",
    "model_from_jsonable",
]

_HN_KEYS = ("omega0", "t_c", "phi", "kappa", "t_d", "n_sites")


def _parse_scalar(text: str):
    text = text.strip()
    if "," in text:
        return [_parse_scalar(part) for part in text.split(",") if part.strip()]
    lowered = text.lower()
    if lowered in ("true", "false"):
        return lowered == "true"
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        pass
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        return text


def load_config(path) -> dict:
    """Parse a config file (JSON or key-value) into a plain dict."""
    raw = Path(path).read_text()
    stripped = raw.lstrip()
    if stripped.startswith("{"):
        try:
            return json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
    cfg = {}
    for lineno, line in enumerate(raw.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        for sep in ("=", ":"):
            if sep in body:
                key, _, value = body.partition(sep)
                break
        else:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', "
                              f"got {line.strip()!r}")
        key = key.strip()
        if not key:
            raise ConfigError(f"{path}:{lineno}: empty key")
        cfg[key] = _parse_scalar(value)
    return cfg


def _statistics(value) -> Statistics:
    try:
        return Statistics(str(value).lower())
    except ValueError:
        raise ConfigError(f"unknown statistics {value!r}; use "
                          "'bosonic' or 'fermionic'") from None


def _boundary(value) -> Boundary:
    try:
        return Boundary(str(value).lower())
    except ValueError:
        raise ConfigError(f"unknown boundary {value!r}; use "
                          "'periodic' or 'open'") from None


def resolve_hn_params(cfg: dict) -> HatanoNelsonParams:
    """Build chain parameters from config keys, with clear error messages."""
    missing = [k for k in _HN_KEYS if k not in cfg]
    if missing:
        raise ConfigError("missing model keys: " + ", ".join(missing))
    try:
        return HatanoNelsonParams(
            omega0=float(cfg["omega0"]),
            t_c=float(cfg["t_c"]),
            phi=float(cfg["phi"]),
            kappa=float(cfg["kappa"]),
            t_d=float(cfg["t_d"]),
            n_sites=int(cfg["n_sites"]),
            statistics=_statistics(cfg.get("statistics", "bosonic")),
            boundary=_boundary(cfg.get("boundary", "open")),
        )
    except ValueError as exc:
        raise ConfigError(f"invalid model parameters: {exc}") from exc


def _matrix_to_pairs(matrix: np.ndarray):
    return [[[float(z.real), float(z.imag)] for z in row] for row in matrix]


def _matrix_from_pairs(data, name: str) -> np.ndarray:
    try:
        arr = np.array([[complex(entry[0], entry[1]) for entry in row]
                        for row in data])
    except (TypeError, IndexError) as exc:
        raise ConfigError(f"{name}: complex entries must be [re, im] pairs") \
            from exc
    return arr


def model_to_jsonable(model: ModelSpec) -> dict:
    """Serialize a generic model with complex entries as [re, im] pairs."""
    return {
        "n_sites": model.n_sites,
        "statistics": model.statistics.value,
        "boundary": model.boundary.value,
        "hamiltonian": _matrix_to_pairs(model.hamiltonian),
        "gamma_decay": _matrix_to_pairs(model.gamma_decay),
        "gamma_pump": _matrix_to_pairs(model.gamma_pump),
    }


def model_from_jsonable(data: dict) -> ModelSpec:
    for key in ("hamiltonian", "gamma_decay", "gamma_pump"):
        if key not in data:
            raise ConfigError(f"generic model is missing {key!r}")
    ham = _matrix_from_pairs(data["hamiltonian"], "hamiltonian")
    return ModelSpec(
        n_sites=int(data.get("n_sites", ham.shape[0])),
        hamiltonian=ham,
        gamma_decay=_matrix_from_pairs(data["gamma_decay"], "gamma_decay"),
        gamma_pump=_matrix_from_pairs(data["gamma_pump"], "gamma_pump"),
        statistics=_statistics(data.get("statistics", "bosonic")),
        boundary=_boundary(data.get("boundary", "open")),
    )


def resolve_model(cfg: dict, base_dir=None):
    """Return (ModelSpec, HatanoNelsonParams or None) from a parsed config.

    Chain parameters give both the real-space model and (for momentum-space
    commands) the parameter set; a generic matrix model gives only the
    former.
    """
    if "model" in cfg:
        return model_from_jsonable(cfg["model"]), None
    if "model_file" in cfg:
        path = Path(cfg["model_file"])
        if base_dir is not None and not path.is_absolute():
            path = Path(base_dir) / path
        try:
            data = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read model file {path}: {exc}") from exc
        return model_from_jsonable(data), None
    params = resolve_hn_params(cfg)
    return build_hatano_nelson(params), params
