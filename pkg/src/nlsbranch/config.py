"""Experiment configuration: validated, hashable, reproducible.

A config captures everything a run needs (problem preset and parameters,
grid, tolerances, sweep ranges, multistart seed and budget, output
location).  Its canonical-JSON hash is embedded in every artifact so that
verification can refuse mismatched inputs; the seed makes runs
bit-reproducible on a fixed build.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
from dataclasses import asdict, dataclass, field

import numpy as np

from .grids import RadialGrid, truncation_radius
from .problems import ProblemSpec, make_grid, problem_preset

__all__ = ["ExperimentConfig", "FORMAT_VERSION"]

FORMAT_VERSION = "1"


@dataclass
class ExperimentConfig:
    preset: str = "frac_power"
    params: dict = field(default_factory=dict)
    n: int = 2048
    R: float | None = None
    lam: float | None = None
    lam_start: float | None = None
    lam_end: float | None = None
    c_min: float | None = None
    c_max: float | None = None
    c_count: int = 20
    c_spacing: str = "log"
    multistart: int = 8
    seed: int = 0
    newton_tol: float = 1e-10
    max_iter: int = 50
    step_initial: float = 0.05
    step_min: float = 1e-6
    step_max: float = 0.5
    verify: bool = False
    profiles: bool = True
    jobs: int = 1
    out_dir: str = ""
    tag: str = ""

    def __post_init__(self):
        if not self.out_dir:
            self.out_dir = os.environ.get("NLSBRANCH_OUT", "artifacts")

    # -- validation -----------------------------------------------------------

    def problem(self) -> ProblemSpec:
        return problem_preset(self.preset, **self.params)

    def validate(self) -> ProblemSpec:
        for name in ("newton_tol", "step_initial", "step_min", "step_max"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.n < 3:
            raise ValueError("grid needs at least 3 nodes")
        if self.multistart < 1 or self.max_iter < 1 or self.jobs < 1:
            raise ValueError("multistart, max_iter and jobs must be >= 1")
        if self.c_spacing not in ("log", "linear"):
            raise ValueError("c_spacing must be 'log' or 'linear'")
        problem = self.problem()  # validates family parameter ranges
        if self.lam_start is not None and self.lam_end is not None and self.lam_start == self.lam_end:
            raise ValueError("empty lambda range")
        if self.c_min is not None and self.c_max is not None:
            if not 0 < self.c_min <= self.c_max:
                raise ValueError("need 0 < c_min <= c_max")
            if self.c_count < 1:
                raise ValueError("c_count must be >= 1")
        return problem

    # -- derived objects -------------------------------------------------------

    def radius(self, problem: ProblemSpec) -> float | None:
        if problem.domain_kind == "unit_ball":
            return None
        if self.R is not None:
            return self.R
        lams = [x for x in (self.lam, self.lam_start, self.lam_end) if x is not None]
        lam_abs = min((abs(x) for x in lams), default=1.0)
        return truncation_radius(max(lam_abs, 1e-2), problem.s)

    def grid(self, problem: ProblemSpec) -> RadialGrid:
        return make_grid(problem, self.n, self.radius(problem))

    def c_grid(self) -> np.ndarray:
        if self.c_min is None or self.c_max is None:
            raise ValueError("mass sweep needs c_min and c_max")
        if self.c_count == 1:
            return np.array([self.c_min])
        if self.c_spacing == "log":
            return np.geomspace(self.c_min, self.c_max, self.c_count)
        return np.linspace(self.c_min, self.c_max, self.c_count)

    # -- serialization ---------------------------------------------------------

    def to_dict(self) -> dict:
        return asdict(self)

    @staticmethod
    def from_dict(d: dict) -> "ExperimentConfig":
        known = {f for f in ExperimentConfig.__dataclass_fields__}
        return ExperimentConfig(**{k: v for k, v in d.items() if k in known})

    def config_hash(self) -> str:
        payload = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode()).hexdigest()[:16]
