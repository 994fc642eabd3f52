"""Run configuration: flat key-value files with dotted keys.

The format is deliberately plain text, diffable, and schema-light::

    # comment
    sigma.kind = parabolic24
    series.N = 2
    solve.times = 0.25, 1, 4

Unknown keys are rejected with the offending line number; every value is
validated against the owning module's ranges when the objects are built.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import PchipInterpolator

from .coefficients import make_conductivity
from .errors import ConfigError
from .simplex import SeriesSpec
from .transform import Contour

__all__ = ["RunConfig", "parse_config", "parse_config_text", "named_profile"]


def _parse_bool(s):
    if s.lower() in ("true", "yes", "1", "on"):
        return True
    if s.lower() in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


def _parse_float_list(s):
    return [float(v) for v in s.replace(",", " ").split()]


def _parse_int_list(s):
    return [int(v) for v in s.replace(",", " ").split()]


@dataclass
class RunConfig:
    """Validated run configuration shared by all CLI commands."""

    sigma_kind: str = "parabolic24"
    sigma_value: float = 1.0          # constant sigma level
    sigma_table: str = ""             # CSV path for tabulated sigma^2
    profile_kind: str = "quadratic"   # quadratic | sine | table
    profile_table: str = ""
    series_N: int = 2
    series_quad_order: int = 32
    series_tol: float = 1e-10
    contour_shape: str = "angled_rays"
    contour_r: float = 0.5
    contour_delta: float = math.pi / 8.0
    contour_kmax: float = 0.0         # 0 = auto from t
    contour_density: int = 40
    solve_x_points: int = 101
    solve_times: list = field(default_factory=lambda: [0.25, 1.0, 4.0])
    eigs_count: int = 4
    eigs_oracle: bool = True
    eigfuns_modes: list = field(default_factory=lambda: [1, 2, 3, 4])
    eigfuns_truncations: list = field(default_factory=list)  # empty = [series_N]
    eigfuns_x_points: int = 201
    output_format: str = "csv"
    output_path: str = ""
    output_svg: str = ""
    verify_seed: int = 1234

    def series_spec(self) -> SeriesSpec:
        return SeriesSpec(truncation_N=self.series_N,
                          quad_order=self.series_quad_order,
                          tol=self.series_tol)

    def conductivity(self):
        if self.sigma_kind == "constant":
            return make_conductivity("constant", c=self.sigma_value)
        if self.sigma_kind == "tabulated":
            if not self.sigma_table:
                raise ConfigError("sigma.kind = tabulated requires sigma.table")
            return make_conductivity("tabulated", table=self.sigma_table)
        return make_conductivity(self.sigma_kind)

    def contour(self, t: float) -> Contour:
        from .errors import DomainError

        kmax = self.contour_kmax if self.contour_kmax > 0 else max(8.0, 6.0 / math.sqrt(t))
        try:
            return Contour(shape=self.contour_shape, r=self.contour_r,
                           delta=self.contour_delta, kmax=kmax,
                           nodes_per_unit=self.contour_density)
        except DomainError as exc:
            raise ConfigError(f"contour: {exc}") from exc

    def profile(self):
        return named_profile(self.profile_kind, self.profile_table)

    def is_parabolic_benchmark(self) -> bool:
        return self.sigma_kind == "parabolic24" and self.profile_kind == "quadratic"


_SCHEMA = {
    "sigma.kind": ("sigma_kind", lambda s: s, ("constant", "parabolic24", "rational9000", "tabulated")),
    "sigma.value": ("sigma_value", float, None),
    "sigma.table": ("sigma_table", lambda s: s, None),
    "profile.kind": ("profile_kind", lambda s: s, ("quadratic", "sine", "table")),
    "profile.table": ("profile_table", lambda s: s, None),
    "series.N": ("series_N", int, None),
    "series.quad_order": ("series_quad_order", int, None),
    "series.tol": ("series_tol", float, None),
    "contour.shape": ("contour_shape", lambda s: s, ("angled_rays", "boundary_omega")),
    "contour.r": ("contour_r", float, None),
    "contour.delta": ("contour_delta", float, None),
    "contour.kmax": ("contour_kmax", float, None),
    "contour.density": ("contour_density", int, None),
    "solve.x_points": ("solve_x_points", int, None),
    "solve.times": ("solve_times", _parse_float_list, None),
    "eigs.count": ("eigs_count", int, None),
    "eigs.oracle": ("eigs_oracle", _parse_bool, None),
    "eigfuns.modes": ("eigfuns_modes", _parse_int_list, None),
    "eigfuns.truncations": ("eigfuns_truncations", _parse_int_list, None),
    "eigfuns.x_points": ("eigfuns_x_points", int, None),
    "output.format": ("output_format", lambda s: s, ("csv", "json")),
    "output.path": ("output_path", lambda s: s, None),
    "output.svg": ("output_svg", lambda s: s, None),
    "verify.seed": ("verify_seed", int, None),
}


def parse_config_text(text: str, source: str = "<config>") -> RunConfig:
    cfg = RunConfig()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.split("#", 1)[0].strip()
        if key not in _SCHEMA:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        attr, conv, allowed = _SCHEMA[key]
        try:
            parsed = conv(value)
        except ValueError as exc:
            raise ConfigError(f"{source}:{lineno}: bad value for {key!r}: {exc}") from exc
        if allowed is not None and parsed not in allowed:
            raise ConfigError(
                f"{source}:{lineno}: {key!r} must be one of {allowed}, got {parsed!r}"
            )
        setattr(cfg, attr, parsed)
    _validate(cfg)
    return cfg


def parse_config(path: str) -> RunConfig:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    return parse_config_text(text, source=path)


def _validate(cfg: RunConfig):
    if cfg.series_N < 0:
        raise ConfigError("series.N must be >= 0")
    if cfg.series_quad_order < 2:
        raise ConfigError("series.quad_order must be >= 2")
    if cfg.solve_x_points < 2:
        raise ConfigError("solve.x_points must be >= 2")
    if any(t <= 0 for t in cfg.solve_times):
        raise ConfigError("solve.times must be positive")
    if cfg.eigs_count < 1:
        raise ConfigError("eigs.count must be >= 1")
    if not cfg.eigfuns_modes or any(m < 1 for m in cfg.eigfuns_modes):
        raise ConfigError("eigfuns.modes must be positive mode indices")
    if cfg.contour_r <= 0:
        raise ConfigError("contour.r must be positive")
    if cfg.contour_density < 1:
        raise ConfigError("contour.density must be >= 1")


def named_profile(kind: str, table: str = ""):
    """Initial-profile evaluator by name: quadratic x(1-x), sine, or table."""
    if kind == "quadratic":
        return lambda x: x * (1.0 - x)
    if kind == "sine":
        return lambda x: np.sin(np.pi * x)
    if kind == "table":
        if not table:
            raise ConfigError("profile.kind = table requires profile.table")
        try:
            data = np.loadtxt(table, delimiter=",", ndmin=2)
        except (OSError, ValueError) as exc:
            raise ConfigError(f"cannot read profile table {table!r}: {exc}") from exc
        if data.shape[1] != 2 or np.any(np.diff(data[:, 0]) <= 0):
            raise ConfigError("profile table needs strictly increasing 'x,q0' rows")
        interp = PchipInterpolator(data[:, 0], data[:, 1], extrapolate=False)
        return lambda x: np.nan_to_num(interp(x), nan=0.0)
    raise ConfigError(f"unknown profile kind {kind!r}")
