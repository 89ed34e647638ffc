"""Scenario configuration files.

INI-style structured text with sections [grid], [params], [bathymetry],
[initial], [integration], [output], and an optional [sweep] section used
by the scaling experiments.
"""

from __future__ import annotations

import configparser
import math

from .errors import ConfigError
from .fields import Params, Scenario


def _get(section, key, conv, default):
    if key not in section:
        return default
    raw = section[key]
    try:
        return conv(raw)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"bad value for {section.name}.{key}: {raw!r}") from exc


def _boolean(raw: str) -> bool:
    low = raw.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(raw)


def _dt_value(raw: str):
    if raw.strip().lower() == "auto":
        return "auto"
    val = float(raw)
    if not math.isfinite(val):
        raise ValueError(raw)
    return val


_KNOWN_SECTIONS = {"grid", "params", "bathymetry", "initial", "integration",
                   "output", "sweep", "convergence"}


def load_config(path) -> tuple[Scenario, dict]:
    """Parse a scenario config; returns (Scenario, extras) where extras holds
    the sweep / convergence options."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        read = parser.read(path)
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc
    if not read:
        raise ConfigError(f"cannot read config file {path}")
    for name in parser.sections():
        if name not in _KNOWN_SECTIONS:
            raise ConfigError(f"unknown section [{name}]")

    def section(name):
        return parser[name] if parser.has_section(name) else parser["DEFAULT"]

    g = section("grid")
    kw = dict(
        nx=_get(g, "nx", int, 128),
        ny=_get(g, "ny", int, 128),
        Lx=_get(g, "lx", float, 2.0 * math.pi),
        Ly=_get(g, "ly", float, 2.0 * math.pi),
        dealias=_get(g, "dealias", _boolean, True),
    )

    ps = section("params")
    try:
        params = Params(
            epsilon=_get(ps, "epsilon", float, 0.1),
            mu=_get(ps, "mu", float, 0.1),
            beta=_get(ps, "beta", float, 0.0),
            s_diag=_get(ps, "s_diag", float, 3.0),
            h_min_guard=_get(ps, "h_min_guard", float, 0.05),
        )
    except ValueError as exc:
        raise ConfigError(f"invalid params: {exc}") from exc

    bs = section("bathymetry")
    bath_opts = {}
    for key, conv in (("amplitude", float), ("width", float), ("x0", float), ("y0", float)):
        val = _get(bs, key, conv, None)
        if val is not None:
            bath_opts[key] = val
    bath_kind = _get(bs, "kind", str, "flat")

    ins = section("initial")
    init_opts = {}
    for key, conv in (("amplitude", float), ("width", float), ("x0", float),
                      ("y0", float), ("kcap", int), ("zeta_amplitude", float),
                      ("curl_amplitude", float)):
        val = _get(ins, key, conv, None)
        if val is not None:
            init_opts[key] = val
    init_kind = _get(ins, "kind", str, "gaussian_hump")
    seed = _get(ins, "seed", int, 0)

    it = section("integration")
    out = section("output")
    try:
        scenario = Scenario(
            params=params,
            bathymetry_kind=bath_kind,
            bathymetry_opts=bath_opts,
            initial_kind=init_kind,
            initial_opts=init_opts,
            seed=seed,
            model=_get(it, "model", str, "new_gn"),
            dt=_get(it, "dt", _dt_value, "auto"),
            cfl=_get(it, "cfl", float, 0.5),
            t_end=_get(it, "t_end", float, 1.0),
            xs_ceiling=_get(it, "xs_ceiling", float, 1e6),
            cg_tol=_get(it, "cg_tol", float, 1e-10),
            cg_max_iter=_get(it, "cg_max_iter", int, 500),
            snapshot_stride=_get(out, "snapshot_stride", int, 0),
            diagnostics_stride=_get(out, "diagnostics_stride", int, 1),
            output_dir=_get(out, "dir", str, "out"),
            **kw,
        )
    except ValueError as exc:
        raise ConfigError(f"invalid scenario: {exc}") from exc

    extras = {}
    if parser.has_section("sweep"):
        sw = parser["sweep"]
        if "mu_values" in sw:
            try:
                extras["mu_values"] = [float(x) for x in sw["mu_values"].replace(",", " ").split()]
            except ValueError as exc:
                raise ConfigError(f"bad value for sweep.mu_values: {sw['mu_values']!r}") from exc
        extras["t_fixed"] = _get(sw, "t_fixed", float, None)
    if parser.has_section("convergence"):
        cv = parser["convergence"]
        extras["dt0"] = _get(cv, "dt0", float, None)
        extras["resolutions"] = None
        if "resolutions" in cv:
            try:
                extras["resolutions"] = [int(x) for x in cv["resolutions"].replace(",", " ").split()]
            except ValueError as exc:
                raise ConfigError(f"bad value for convergence.resolutions: {cv['resolutions']!r}") from exc
    return scenario, extras


def scenario_to_dict(scenario: Scenario) -> dict:
    return {
        "grid": {"nx": scenario.nx, "ny": scenario.ny, "lx": scenario.Lx,
                 "ly": scenario.Ly, "dealias": scenario.dealias},
        "params": {"epsilon": scenario.params.epsilon, "mu": scenario.params.mu,
                   "beta": scenario.params.beta, "s_diag": scenario.params.s_diag,
                   "h_min_guard": scenario.params.h_min_guard},
        "bathymetry": {"kind": scenario.bathymetry_kind, **scenario.bathymetry_opts},
        "initial": {"kind": scenario.initial_kind, "seed": scenario.seed,
                    **scenario.initial_opts},
        "integration": {"model": scenario.model, "dt": scenario.dt,
                        "cfl": scenario.cfl, "t_end": scenario.t_end,
                        "xs_ceiling": scenario.xs_ceiling, "cg_tol": scenario.cg_tol,
                        "cg_max_iter": scenario.cg_max_iter},
        "output": {"dir": scenario.output_dir,
                   "snapshot_stride": scenario.snapshot_stride,
                   "diagnostics_stride": scenario.diagnostics_stride},
    }
