"""Problem configuration: JSON schema, validation, and materialization.

Configs are strict: unknown keys anywhere are rejected so a typo cannot
silently fall back to a default.  Right-hand-side expressions are
anchored families ('t' means t - alpha and so on) so every named rhs
satisfies the membership condition x(alpha) = 0 on any interval.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, KernelContract, NotAnchoredAtAlpha
from .function_space import Grid, GridFunction, from_callable, read_csv
from .kernels import (
    KernelSpec,
    example1_kernel,
    example2_kernel,
    linear_kernel,
    zero_kernel,
)

_TOP_KEYS = {"kernel", "interval", "n_cells", "rhs", "tol", "max_iter", "seed"}
_REQUIRED = {"kernel", "interval", "n_cells", "rhs", "tol"}
_KERNEL_KEYS = {"name", "params"}
_RHS_KEYS = {"expression", "csv"}
_EXPRESSIONS = ("t", "t^2", "sin")
_MIN_CELLS = 16

KERNEL_NAMES = ("zero", "linear", "example1", "example2_linw_atan")


@dataclass(frozen=True)
class ProblemConfig:
    kernel_name: str
    kernel_params: dict
    alpha: float
    beta: float
    n_cells: int
    rhs: dict
    tol: float
    max_iter: int = 50
    seed: int = 0

    @classmethod
    def from_file(cls, path) -> "ProblemConfig":
        try:
            with open(path) as fh:
                raw = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"malformed JSON: {exc}") from exc
        return cls.from_dict(raw)

    @classmethod
    def from_dict(cls, raw: dict) -> "ProblemConfig":
        if not isinstance(raw, dict):
            raise ConfigError("config must be a JSON object")
        unknown = set(raw) - _TOP_KEYS
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        missing = _REQUIRED - set(raw)
        if missing:
            raise ConfigError(f"missing config keys: {sorted(missing)}")

        kern = raw["kernel"]
        if not isinstance(kern, dict) or set(kern) - _KERNEL_KEYS or "name" not in kern:
            raise ConfigError("kernel must be an object with keys 'name' and optional 'params'")
        name = kern["name"]
        if name not in KERNEL_NAMES:
            raise ConfigError(f"unknown kernel {name!r}; choose from {KERNEL_NAMES}")
        params = kern.get("params", {})
        if not isinstance(params, dict):
            raise ConfigError("kernel params must be an object")

        interval = raw["interval"]
        if (not isinstance(interval, (list, tuple)) or len(interval) != 2
                or not all(isinstance(v, (int, float)) for v in interval)):
            raise ConfigError("interval must be [alpha, beta]")
        alpha, beta = float(interval[0]), float(interval[1])
        if not beta > alpha:
            raise ConfigError(f"need beta > alpha, got [{alpha}, {beta}]")

        n_cells = raw["n_cells"]
        if not isinstance(n_cells, int) or isinstance(n_cells, bool) or n_cells < _MIN_CELLS:
            raise ConfigError(f"n_cells must be an integer >= {_MIN_CELLS}")

        rhs = raw["rhs"]
        if not isinstance(rhs, dict) or len(set(rhs) & _RHS_KEYS) != 1 or set(rhs) - _RHS_KEYS:
            raise ConfigError("rhs must carry exactly one of 'expression' or 'csv'")
        if "expression" in rhs and rhs["expression"] not in _EXPRESSIONS:
            raise ConfigError(
                f"unknown rhs expression {rhs['expression']!r}; choose from {_EXPRESSIONS} or a csv"
            )

        tol = raw["tol"]
        if not isinstance(tol, (int, float)) or not tol > 0:
            raise ConfigError("tol must be a positive number")

        max_iter = raw.get("max_iter", 50)
        if not isinstance(max_iter, int) or isinstance(max_iter, bool) or max_iter < 1:
            raise ConfigError("max_iter must be a positive integer")

        seed = raw.get("seed", 0)
        if not isinstance(seed, int) or isinstance(seed, bool):
            raise ConfigError("seed must be an integer")

        # fail fast: kernel params and interval compatibility are part of
        # the schema, not something to discover at solve time
        _build_kernel(name, dict(params), alpha, beta)

        return cls(kernel_name=name, kernel_params=dict(params), alpha=alpha,
                   beta=beta, n_cells=n_cells, rhs=dict(rhs), tol=float(tol),
                   max_iter=max_iter, seed=seed)

    def to_dict(self) -> dict:
        return {
            "kernel": {"name": self.kernel_name, "params": self.kernel_params},
            "interval": [self.alpha, self.beta],
            "n_cells": self.n_cells,
            "rhs": self.rhs,
            "tol": self.tol,
            "max_iter": self.max_iter,
            "seed": self.seed,
        }

    def build_grid(self) -> Grid:
        return Grid(self.alpha, self.beta, self.n_cells)

    def build_kernel(self) -> KernelSpec:
        return _build_kernel(self.kernel_name, self.kernel_params,
                             self.alpha, self.beta)

    def build_rhs(self, grid: Grid) -> GridFunction:
        if "expression" in self.rhs:
            a = grid.alpha
            f = {
                "t": lambda t: t - a,
                "t^2": lambda t: (t - a) ** 2,
                "sin": lambda t: math.sin(t - a),
            }[self.rhs["expression"]]
            return from_callable(f, grid)
        return _resample_csv(self.rhs["csv"], grid)


def _check_params(name: str, params: dict, required: set, optional: set = frozenset()):
    extra = set(params) - required - optional
    if extra:
        raise ConfigError(f"kernel {name!r}: unknown params {sorted(extra)}")
    missing = required - set(params)
    if missing:
        raise ConfigError(f"kernel {name!r}: missing params {sorted(missing)}")
    for key, val in params.items():
        if not isinstance(val, (int, float)) or isinstance(val, bool):
            raise ConfigError(f"kernel {name!r}: param {key!r} must be a number")


def _build_kernel(name: str, params: dict, alpha: float, beta: float) -> KernelSpec:
    if name == "zero":
        _check_params(name, params, set())
        return zero_kernel()
    if name == "linear":
        _check_params(name, params, {"lambda"})
        return linear_kernel(float(params["lambda"]))
    if name == "example1":
        _check_params(name, params, {"a_bar"})
        if alpha < -1e-12 or beta > 1.0 + 1e-12:
            raise ConfigError("example1 kernel lives on [0, 1]; interval must fit inside")
        return example1_kernel(float(params["a_bar"]))
    if name == "example2_linw_atan":
        _check_params(name, params, set(), optional={"A", "B"})
        if abs(alpha) > 1e-12:
            raise ConfigError("example2_linw_atan requires alpha = 0")
        A = float(params.get("A", 1.0))
        B = float(params.get("B", 0.0))
        try:
            return example2_kernel(
                w=lambda s: np.asarray(s, float),
                w_prime=lambda s: np.ones_like(np.asarray(s, float)),
                z=np.arctan,
                z_prime=lambda x: 1.0 / (1.0 + np.asarray(x, float) ** 2),
                A=A, B=B, T=beta,
            )
        except KernelContract as exc:
            raise ConfigError(f"example2_linw_atan: {exc}") from exc
    raise ConfigError(f"unknown kernel {name!r}")


def _resample_csv(path, grid: Grid) -> GridFunction:
    try:
        data = read_csv(path)
    except OSError as exc:
        raise ConfigError(f"cannot read rhs csv: {exc}") from exc
    except (ValueError, NotAnchoredAtAlpha) as exc:
        raise ConfigError(f"bad rhs csv: {exc}") from exc
    src = data.grid
    pad = 1e-12 * max(1.0, abs(grid.alpha), abs(grid.beta))
    if src.alpha > grid.alpha + pad or src.beta < grid.beta - pad:
        raise ConfigError(
            f"rhs csv covers [{src.alpha}, {src.beta}] but the grid needs "
            f"[{grid.alpha}, {grid.beta}]"
        )
    cols = [
        np.interp(grid.nodes, src.nodes, data.values[:, k])
        for k in range(data.dim)
    ]
    vals = np.stack(cols, axis=1)
    try:
        return GridFunction(grid, vals)
    except NotAnchoredAtAlpha as exc:
        raise ConfigError(f"rhs csv does not vanish at alpha: {exc}") from exc
