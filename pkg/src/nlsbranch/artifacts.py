"""Artifact persistence: JSON metadata, CSV numeric payloads, NPZ profiles.

Every artifact embeds the format version, the full config dict and its
hash.  Numeric CSV columns are written with 17 significant digits so a
written-then-reloaded artifact reproduces bit-identical diagnostics.
"""

from __future__ import annotations

import json
import os

import numpy as np

from .config import FORMAT_VERSION, ExperimentConfig
from .massmin import MassCurve
from .solve import Branch, Solution

__all__ = [
    "write_solution",
    "write_branch",
    "write_masscurve",
    "load_artifact",
    "ArtifactError",
]

_FMT = "%.17g"


class ArtifactError(RuntimeError):
    pass


def _jsonable(x):
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _header(config: ExperimentConfig, kind: str, extra: dict) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "kind": kind,
        "config": config.to_dict(),
        "config_hash": config.config_hash(),
        **_jsonable(extra),
    }


def _write_json(path: str, payload: dict):
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=1)


def _write_csv(path: str, columns: dict):
    names = list(columns)
    data = np.column_stack([np.asarray(columns[k], dtype=float) for k in names])
    np.savetxt(path, data, fmt=_FMT, delimiter=",", header=",".join(names), comments="")


def _read_csv(path: str) -> dict:
    with open(path) as fh:
        names = fh.readline().strip().split(",")
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return {name: data[:, j] for j, name in enumerate(names)}


def write_solution(config, grid, sol: Solution, spectrum=None, identities=None, out_dir=None, tag="solution"):
    out_dir = out_dir or config.out_dir
    os.makedirs(out_dir, exist_ok=True)
    base = os.path.join(out_dir, tag)
    extra = {
        "lambda": sol.lam,
        "mass": sol.mass,
        "energy": sol.energy,
        "residual_norm": sol.residual_norm,
        "converged": sol.converged,
        "iterations": sol.iterations,
        "grid": {"domain": grid.domain_kind, "N": grid.N, "n": grid.n, "R": grid.R},
    }
    if spectrum is not None:
        extra["spectrum"] = {
            "morse_index": spectrum.morse_index,
            "smallest_abs_eig": spectrum.smallest_abs_eig,
            "eigenvalues": spectrum.eigenvalues,
            "nondegenerate": spectrum.nondegenerate,
        }
    if identities is not None:
        extra["identities"] = [vars(r) for r in identities]
    _write_json(base + ".json", _header(config, "solution", extra))
    _write_csv(base + "_profile.csv", {"r": grid.nodes, "u": sol.u})
    return base + ".json"


def write_branch(config, branch: Branch, identities=None, out_dir=None, tag="branch", profiles=True):
    out_dir = out_dir or config.out_dir
    os.makedirs(out_dir, exist_ok=True)
    base = os.path.join(out_dir, tag)
    grid = branch.grid
    md = branch.mass_derivative
    extra = {
        "nodes": len(branch),
        "lambda_range": [float(branch.lam[0]), float(branch.lam[-1])],
        "truncated": branch.truncated,
        "reason": branch.reason,
        "mass_derivative_min": float(md.min()),
        "mass_derivative_max": float(md.max()),
        "mass_derivative_sign_constant": bool(md.min() > 0 or md.max() < 0),
        "v0_positive_nodes": int(np.count_nonzero(branch.v0 >= 0)),
        "grid": {"domain": grid.domain_kind, "N": grid.N, "n": grid.n, "R": grid.R},
        "has_profiles": bool(profiles),
    }
    if identities is not None:
        extra["identities"] = [[vars(r) for r in reps] for reps in identities]
    _write_json(base + ".json", _header(config, "branch", extra))
    _write_csv(
        base + ".csv",
        {
            "lambda": branch.lam,
            "mass": branch.mass,
            "energy": branch.energy,
            "mass_derivative": branch.mass_derivative,
            "residual": branch.residual,
            "v0": branch.v0,
            "tangent_sign_changes": branch.tangent_sign_changes,
        },
    )
    if profiles:
        np.savez_compressed(
            base + "_profiles.npz",
            r=grid.nodes,
            lam=branch.lam,
            U=np.array([s.u for s in branch.solutions]),
            V=np.array(branch.tangents),
        )
    return base + ".json"


def write_masscurve(config, curve: MassCurve, out_dir=None, tag="masscurve", profiles=True):
    out_dir = out_dir or config.out_dir
    os.makedirs(out_dir, exist_ok=True)
    base = os.path.join(out_dir, tag)
    grid = curve.grid
    extra = {
        "points": len(curve),
        "kinks": [
            {"index": int(i), "c": float(curve.c[i]), "dq_gap": float(curve.dq_left[i] - curve.dq_right[i])}
            for i in curve.kink_indices
        ],
        "grid": {"domain": grid.domain_kind, "N": grid.N, "n": grid.n, "R": grid.R},
        "has_profiles": bool(profiles),
    }
    _write_json(base + ".json", _header(config, "masscurve", extra))
    _write_csv(
        base + ".csv",
        {
            "c": curve.c,
            "m": curve.m,
            "lambda": curve.lam,
            "dq_left": curve.dq_left,
            "dq_right": curve.dq_right,
            "n_clusters": curve.n_clusters,
            "morse_index": curve.morse,
        },
    )
    if profiles:
        np.savez_compressed(
            base + "_profiles.npz",
            r=grid.nodes,
            c=curve.c,
            U=np.array([r.u for r in curve.minimizers]),
        )
    return base + ".json"


def load_artifact(path: str) -> dict:
    """Load an artifact JSON plus its sibling numeric payloads."""
    if not os.path.exists(path):
        raise ArtifactError(f"no artifact at {path}")
    with open(path) as fh:
        meta = json.load(fh)
    if meta.get("format_version") != FORMAT_VERSION:
        raise ArtifactError(f"unsupported format_version {meta.get('format_version')!r}")
    config = ExperimentConfig.from_dict(meta["config"])
    if config.config_hash() != meta.get("config_hash"):
        raise ArtifactError("config hash mismatch: artifact does not match its embedded config")
    base = path[: -len(".json")]
    out = {"meta": meta, "config": config, "kind": meta.get("kind")}
    if meta["kind"] == "solution" and os.path.exists(base + "_profile.csv"):
        cols = _read_csv(base + "_profile.csv")
        out["r"], out["u"] = cols["r"], cols["u"]
    if os.path.exists(base + ".csv"):
        out["table"] = _read_csv(base + ".csv")
    if os.path.exists(base + "_profiles.npz"):
        with np.load(base + "_profiles.npz") as npz:
            out["profiles"] = {k: npz[k] for k in npz.files}
    return out
