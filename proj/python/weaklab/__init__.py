"""Python bindings for the weaklab dyadic weight laboratory."""

import json

from . import _core
from ._core import (
    ConfigError,
    DomainError,
    UsageError,
    dyadic_maximal,
    run_cli,
    uncentered_maximal,
    weak_l1_norm,
    weight_cells,
)

__all__ = [
    "ConfigError",
    "DomainError",
    "UsageError",
    "czd",
    "dyadic_maximal",
    "global_constant",
    "mixed_ratio",
    "run_cli",
    "sharpness_a1",
    "uncentered_maximal",
    "weak_l1_norm",
    "weight_cells",
]


def global_constant(spec, J, L, kind="A1", p=2.0, alpha=1.0, beta=0.0):
    return json.loads(_core.global_constant_json(spec, J, L, kind, p, alpha, beta))


def mixed_ratio(f, u, v, J=0, variant="Md"):
    return json.loads(_core.mixed_ratio_json(list(f), J, u, v, variant))


def czd(f, v, height, J=0, r=2.0):
    return json.loads(_core.czd_json(list(f), J, v, height, r))


def sharpness_a1(deltas, grid_L=0):
    return json.loads(_core.sharpness_a1_json(list(deltas), grid_L))
