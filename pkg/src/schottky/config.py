"""Run configuration and the pass/fail thresholds of the verification suite."""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field, fields

from .exceptions import ValidationError

CONFIG_ENV = "SCHOTTKY_CONFIG"

# single source of truth for every threshold used by ``checks``
THRESHOLDS = {
    "theta_closed_form": 1e-12,
    "jacobi_quartic": 1e-12,
    "quasi_periodicity": 1e-9,
    "heat_fd": 1e-6,
    "igusa_vanishing": 1e-9,
    "lattice_difference": 1e-8,
    "projection": 1e-13,
    "projection_max_iter": 25,
    "singular_scale": 1e-6,
    "proportionality": 1e-4,
    "discrimination": 1e-2,
    "hyper_symmetry": 1e-9,
    "hyper_locus": 1e-8,
    "hyper_floor": 1e-6,
    "hyper_ceiling": 1e-3,
    "hyper_s4_ratio": 1e-4,
    "genus1_lambda": 1e-8,
    "wedge_det": 1e-9,
    "cocycle": 1e-9,
    "weight8": 1e-8,
    "conjugation": 1e-4,
    "chi_modulus": 1e-6,
    "det_s4_weight": 1e-4,
}

RUNTIME_LIMITS = {
    "characteristics": 1.0,
    "theta": 30.0,
    "heat": 60.0,
    "igusa": 120.0,
    "lattice": 180.0,
    "projection": 120.0,
    "klein": 120.0,
    "singular": 180.0,
    "hyperelliptic": 180.0,
    "genus1": 10.0,
    "multilinear": 60.0,
    "modularity": 300.0,
}


@dataclass
class Config:
    theta_eps: float = 1e-13
    locus_tol: float = 1e-12
    singular_tol: float = 1e-6
    klein_tol: float = 1e-3
    im_range: list = field(default_factory=lambda: [0.5, 0.9])
    seeds: list = field(default_factory=lambda: [1, 2, 3, 4, 5])
    threads: int = 1
    precision: str = "double"

    def validate(self) -> "Config":
        for name in ("theta_eps", "locus_tol", "singular_tol", "klein_tol"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or not v > 0:
                raise ValidationError(f"{name} must be a positive number, got {v!r}")
        if len(self.im_range) != 2 or not 0 < self.im_range[0] <= self.im_range[1]:
            raise ValidationError(f"im_range must be an ordered positive pair, got {self.im_range!r}")
        if not all(isinstance(s, int) for s in self.seeds):
            raise ValidationError("seeds must be integers")
        if not isinstance(self.threads, int) or self.threads < 1:
            raise ValidationError("threads must be a positive integer")
        if self.precision != "double":
            raise ValidationError("only 'double' precision is supported")
        return self

    def to_dict(self) -> dict:
        return asdict(self)


def load_config(path: str | None = None, **overrides) -> Config:
    """Defaults, then the JSON file at ``path`` (or $SCHOTTKY_CONFIG), then ``overrides``."""
    data = {}
    path = path or os.environ.get(CONFIG_ENV)
    if path:
        try:
            with open(path) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"cannot read config {path}: {exc}") from exc
        known = {f.name for f in fields(Config)}
        unknown = set(data) - known
        if unknown:
            raise ValidationError(f"unknown config keys: {sorted(unknown)}")
    data.update({k: v for k, v in overrides.items() if v is not None})
    return Config(**data).validate()
