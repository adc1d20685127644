"""Command line interface.

Subcommands::

    generate   sample a dataset (optionally noisy) to CSV
    pointwise  one pipeline run, errors on stdout
    sweep      replicated bandwidth sweep to CSV (+ slope JSON)
    embed      spectral-embedding comparison to CSV
    skdiag     scaling residual trace to CSV
    moments    kernel profile moments to stdout

Every option can also be supplied through ``--config FILE``, a flat
``key = value`` text file whose keys are the option names with
underscores; explicit flags win over file values.  Exit codes: 0 on
success, 1 on usage errors, 2 on numerical failure.  All floats in
output files use 17 significant digits, so identical invocations
produce byte-identical artifacts.
"""

import argparse
import re
import sys
import time
from dataclasses import dataclass

import numpy as np

from .csvio import fmt, write_eigenpairs, write_residual_history, write_rows, write_slopes_json
from .errors import DegenerateInputError, NumericalFailureError, UsageError
from .experiments import (
    _noisy_dataset,
    embedding_experiment,
    epsilon_sweep,
    pointwise_experiment,
    slope_fit,
    write_embedding_csv,
    write_sweep_csv,
)
from .kernel import Convention, build_affinity, kernel_moments
from .laplacian import LaplacianKind
from .manifold import DensitySpec, write_dataset_csv
from .noise import NoiseKind, NoiseModel
from .sinkhorn import SkConfig, approx_sym_sk

_REQUIRED = object()

_DENSITIES = {
    "sinusoidal1d": DensitySpec.SINUSOIDAL_1D,
    "uniform_circle": DensitySpec.UNIFORM_CIRCLE,
}
_NOISES = ("none", "simple", "heteroskedastic", "iid")
_LAPS = {k.value: k for k in LaplacianKind}


def _density(s):
    if s not in _DENSITIES:
        raise ValueError(f"density must be one of {sorted(_DENSITIES)}")
    return s


def _noise(s):
    if s not in _NOISES:
        raise ValueError(f"noise must be one of {_NOISES}")
    return s


def _lap(s):
    if s not in _LAPS:
        raise ValueError(f"lap must be one of {sorted(_LAPS)}")
    return s


def parse_grid(s):
    """Parse ``start:stop:COUNTlog`` / ``start:stop:COUNTlin`` grids."""
    parts = str(s).split(":")
    match = re.fullmatch(r"(\d+)(log|lin)", parts[-1].strip()) if len(parts) == 3 else None
    if match is None:
        raise ValueError("grid must look like start:stop:10log or start:stop:10lin")
    start, stop = float(parts[0]), float(parts[1])
    count, kind = int(match.group(1)), match.group(2)
    if count < 1:
        raise ValueError("grid needs at least one point")
    if kind == "log":
        if start <= 0 or stop <= 0:
            raise ValueError("log grids need positive endpoints")
        return [float(e) for e in np.geomspace(start, stop, count)]
    return [float(e) for e in np.linspace(start, stop, count)]


_SK_OPTS = [
    ("eps_sk", float, 1e-3),
    ("c_sk", float, 0.01),
    ("max_iter", int, 50),
    ("sk_init", str, "rowsum"),
]
_NOISE_OPTS = [
    ("noise", _noise, "none"),
    ("m", int, 2000),
    ("sigma_out", float, 0.1),
    ("p_out", float, 0.1),
]

_SCHEMAS = {
    "generate": [
        ("n", int, 3000),
        ("density", _density, "sinusoidal1d"),
        ("seed", int, 0),
        ("out", str, _REQUIRED),
    ]
    + _NOISE_OPTS,
    "pointwise": [
        ("n", int, 3000),
        ("density", _density, "sinusoidal1d"),
        ("epsilon", float, _REQUIRED),
        ("lap", _lap, "bistoch_un"),
        ("seed", int, 0),
        ("out", str, None),
    ]
    + _SK_OPTS
    + _NOISE_OPTS,
    "sweep": [
        ("n", int, 3000),
        ("density", _density, "sinusoidal1d"),
        ("eps_grid", str, _REQUIRED),
        ("replicas", int, 20),
        ("lap", _lap, "bistoch_un"),
        ("seed", int, 0),
        ("threads", int, None),
        ("out", str, _REQUIRED),
        ("slopes_out", str, None),
        ("slope_points", int, 3),
    ]
    + _SK_OPTS
    + _NOISE_OPTS,
    "embed": [
        ("n", int, 1000),
        ("epsilon", float, 5e-4),
        ("replicas", int, 20),
        ("seed", int, 0),
        ("threads", int, None),
        ("out", str, _REQUIRED),
        ("eigen_out", str, None),
    ]
    + _SK_OPTS
    + [
        ("noise", _noise, "simple"),
        ("m", int, 2000),
        ("sigma_out", float, 0.1),
        ("p_out", float, 0.1),
    ],
    "skdiag": [
        ("fixture", str, None),
        ("n", int, 3000),
        ("density", _density, "sinusoidal1d"),
        ("epsilon", float, None),
        ("seed", int, 0),
        ("out", str, _REQUIRED),
    ]
    + _SK_OPTS
    + _NOISE_OPTS,
    "moments": [("d", int, 1)],
}


@dataclass
class RunConfig:
    """A validated command name plus its parameter table."""

    command: str
    params: dict


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _read_config_file(path, allowed):
    table = {}
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file: {exc}")
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in allowed:
            raise UsageError(f"{path}:{lineno}: unknown key '{key}'")
        table[key] = value
    return table


def parse_config(argv=None):
    """Parse argv (and an optional config file) into a RunConfig."""
    parser = _Parser(prog="sinklap", description=__doc__.splitlines()[0])
    subs = parser.add_subparsers(dest="command", metavar="command")
    for command, schema in _SCHEMAS.items():
        sub = subs.add_parser(command, prog=f"sinklap {command}")
        sub.add_argument("--config", default=None)
        for name, _conv, _default in schema:
            sub.add_argument("--" + name.replace("_", "-"), dest=name, default=None)
    ns = vars(parser.parse_args(argv))
    command = ns.get("command")
    if command is None:
        raise UsageError("a command is required (see sinklap --help)")
    schema = _SCHEMAS[command]
    names = {name for name, _c, _d in schema}
    file_values = (
        _read_config_file(ns["config"], names) if ns.get("config") else {}
    )
    params = {}
    for name, conv, default in schema:
        raw = ns.get(name)
        if raw is None:
            raw = file_values.get(name)
        if raw is None:
            if default is _REQUIRED:
                raise UsageError(f"--{name.replace('_', '-')} is required")
            params[name] = default
            continue
        try:
            params[name] = conv(raw)
        except (TypeError, ValueError) as exc:
            raise UsageError(f"bad value for --{name.replace('_', '-')}: {exc}")
    return RunConfig(command=command, params=params)


def _noise_model(params):
    if params["noise"] == "none":
        return None
    return NoiseModel(
        kind=NoiseKind(params["noise"]),
        m=params["m"],
        sigma_out=params["sigma_out"],
        p_out=params["p_out"],
    )


def _sk_config(params):
    return SkConfig(
        c_sk=params["c_sk"],
        eps_sk=params["eps_sk"],
        max_iter=params["max_iter"],
        init=params["sk_init"],
    )


def _cmd_generate(p):
    ds = _noisy_dataset(p["n"], _DENSITIES[p["density"]], _noise_model(p), p["seed"])
    write_dataset_csv(ds, p["out"])


def _cmd_pointwise(p):
    res = pointwise_experiment(
        p["n"],
        _DENSITIES[p["density"]],
        p["epsilon"],
        _LAPS[p["lap"]],
        sk_config=_sk_config(p),
        noise_model=_noise_model(p),
        seed=p["seed"],
    )
    print(f"relerr2 = {fmt(res.relerr2)}")
    print(f"relerrinf = {fmt(res.relerrinf)}")
    print(f"sk_iters = {res.sk_iters}")
    print(f"projection_hits = {res.projection_hits}")
    if p["out"]:
        write_rows(
            p["out"],
            ("relerr2", "relerrinf", "sk_iters", "projection_hits"),
            [
                (
                    fmt(res.relerr2),
                    fmt(res.relerrinf),
                    str(res.sk_iters),
                    str(res.projection_hits),
                )
            ],
        )


def _cmd_sweep(p):
    grid = parse_grid(p["eps_grid"])
    records = epsilon_sweep(
        p["n"],
        _DENSITIES[p["density"]],
        grid,
        p["replicas"],
        _LAPS[p["lap"]],
        sk_config=_sk_config(p),
        noise_model=_noise_model(p),
        base_seed=p["seed"],
        threads=p["threads"],
    )
    write_sweep_csv(records, p["out"])
    if p["slopes_out"]:
        k = p["slope_points"]
        if not 2 <= k <= len(records):
            raise UsageError("slope_points must lie in [2, grid size]")
        log_eps = np.log([r.epsilon for r in records])
        errinf = [r.relerrinf_mean for r in records]
        # the sup-norm bias branch starts where the U-shaped curve turns,
        # not at the end of the grid (past the bias branch the error
        # saturates and bends back down)
        start = min(int(np.argmin(errinf)), len(records) - k)
        slopes = [
            (
                "small_eps",
                slope_fit(log_eps, np.log([r.relerr2_mean for r in records]), (0, k)),
            ),
            (
                "large_eps",
                slope_fit(log_eps, np.log(errinf), (start, start + k)),
            ),
        ]
        write_slopes_json(p["slopes_out"], slopes)


def _cmd_embed(p):
    if p["noise"] == "none":
        raise UsageError("embed needs a noise model (use --noise simple|heteroskedastic|iid)")
    result = embedding_experiment(
        p["n"],
        _noise_model(p),
        p["epsilon"],
        sk_config=_sk_config(p),
        replicas=p["replicas"],
        base_seed=p["seed"],
        threads=p["threads"],
    )
    write_embedding_csv(result.records, p["out"])
    if p["eigen_out"]:
        for method, eig in result.first_eigenpairs.items():
            write_eigenpairs(f"{p['eigen_out']}_{method}.csv", eig.values, eig.vectors)


def _cmd_skdiag(p):
    if p["fixture"] is not None:
        if p["fixture"] != "perm2":
            raise UsageError("the only built-in fixture is 'perm2'")
        target = np.array([[0.0, 1.0], [1.0, 0.0]])
    else:
        if p["epsilon"] is None:
            raise UsageError("--epsilon is required without --fixture")
        ds = _noisy_dataset(
            p["n"], _DENSITIES[p["density"]], _noise_model(p), p["seed"]
        )
        target = build_affinity(
            ds.points,
            p["epsilon"],
            intrinsic_dim=1,
            zero_diag=True,
            convention=Convention.UNSCALED,
        )
    res = approx_sym_sk(target, _sk_config(p))
    write_residual_history(p["out"], res.residual_history)
    print(f"iterations = {res.iterations}")
    print(f"converged = {str(res.converged).lower()}")
    print(f"projection_hits = {res.projection_hits}")


def _cmd_moments(p):
    m0, m2 = kernel_moments(p["d"])
    print(f"m0 = {fmt(m0)}")
    print(f"m2 = {fmt(m2)}")


_COMMANDS = {
    "generate": _cmd_generate,
    "pointwise": _cmd_pointwise,
    "sweep": _cmd_sweep,
    "embed": _cmd_embed,
    "skdiag": _cmd_skdiag,
    "moments": _cmd_moments,
}


def run(cfg):
    """Execute a parsed RunConfig; returns the process exit code."""
    start = time.perf_counter()
    try:
        _COMMANDS[cfg.command](cfg.params)
    except UsageError as exc:
        print(f"sinklap {cfg.command}: error: {exc}", file=sys.stderr)
        return 1
    except (DegenerateInputError, NumericalFailureError) as exc:
        print(f"sinklap {cfg.command}: numerical failure: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"sinklap {cfg.command}: error: {exc}", file=sys.stderr)
        return 1
    wall = time.perf_counter() - start
    bits = [cfg.command]
    for key in ("n", "epsilon", "replicas", "d"):
        if cfg.params.get(key) is not None:
            bits.append(f"{key}={cfg.params[key]}")
    print(f"sinklap {' '.join(bits)} wall={wall:.2f}s", file=sys.stderr)
    return 0


def main(argv=None):
    try:
        cfg = parse_config(argv)
    except UsageError as exc:
        print(f"sinklap: error: {exc}", file=sys.stderr)
        return 1
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
