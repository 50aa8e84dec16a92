"""Command-line interface.

Subcommands
-----------
separate   compute the separated noise of the configured operation
compile    compile the configured gate into an ideal unitary plus noise
simulate   exact vs separated observable curves on the output grid (CSV)
validate   run the validation suite; nonzero exit on failure
steady     steady-state separated noise and residual mode amplitudes
choi       Choi matrix and spectrum of the noise-shaping map
sweep      separated-noise spectrum across a theta or gamma grid (CSV)

Common flags: ``--config PATH``, ``--out PATH``, ``--theta FLOAT``,
``--gamma FLOAT``, ``--steps INT``, ``--route {integral,ode,spectral}``,
``--tol FLOAT``.  ``--gamma`` rescales the configured noise schedule by the
given factor; ``--theta`` re-derives the operation time from the requested
angle (time-independent Hamiltonians only).  Exit codes: 0 success, 1 a
numeric check failed, 2 configuration problems.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .basis import structure_tensor
from .config import ConfigError, ExperimentConfig, load_config
from .expr import ExprError
from .gates import compile_monolithic, compile_per_op
from .lindblad import evolve_trajectory
from .separation import (
    choi_of_transform,
    residual_components,
    separated,
    separated_spectral,
    steady_state,
)
from .serialize import complex_matrix, write_csv, write_json
from .superops import omega_of

DEFAULT_STEPS = 4096


class NumericCheckFailed(RuntimeError):
    pass


def _omega_and_scale(cfg: ExperimentConfig):
    sched = cfg.hamiltonian_schedule()
    if not sched.is_constant:
        raise ConfigError("this operation needs a time-independent Hamiltonian")
    tensor = structure_tensor(cfg.basis)
    omega = omega_of(sched, 0.0, tensor)
    scale = float(np.linalg.norm(omega, 2))  # equals 2J
    return omega, scale


def _resolve_t_op(cfg: ExperimentConfig, theta: float | None):
    """(t_op, theta): --theta rescales the window at fixed energy scale."""
    if theta is None:
        sched = cfg.hamiltonian_schedule()
        if sched.is_constant:
            _, scale = _omega_and_scale(cfg)
            return cfg.t_op, (scale * cfg.t_op if scale > 0 else None)
        return cfg.t_op, None
    _, scale = _omega_and_scale(cfg)
    if scale == 0.0:
        raise ConfigError("--theta needs a nonzero Hamiltonian")
    return theta / scale, theta


def cmd_separate(args) -> int:
    cfg = load_config(args.config)
    t_op, theta = _resolve_t_op(cfg, args.theta)
    steps = args.steps or cfg.steps or DEFAULT_STEPS
    gen = cfg.generator(t_op=t_op, noise_scale=args.gamma)
    result = separated(gen, t_op, route=args.route, steps=steps)
    payload = {
        "basis": cfg.basis.label,
        "route": result.route,
        "t_op": result.t_op,
        "theta": theta,
        "strength": result.strength,
        "spectrum": np.sort(result.gamma_s.spectrum()).tolist(),
        "physical": result.gamma_s.is_physical(args.tol),
        "gamma_s": complex_matrix(result.gamma_s.gamma),
        "gamma_f": complex_matrix(result.gamma_f.gamma),
    }
    write_json(args.out or "separate.json", payload)
    input_physical = all(
        np.linalg.eigvalsh(g).min() >= -args.tol
        for g in gen.noise.sample(np.linspace(0.0, t_op, 33))
    )
    if input_physical and not result.gamma_s.is_physical(args.tol):
        print(
            "separated noise lost positivity although the input noise is "
            "positive semi-definite",
            file=sys.stderr,
        )
        return 1
    return 0


def cmd_compile(args) -> int:
    cfg = load_config(args.config)
    spec = cfg.gate_spec(noise_scale=args.gamma)
    steps = args.steps or cfg.steps or DEFAULT_STEPS
    compiler = compile_monolithic if args.method == "monolithic" else compile_per_op
    gate = compiler(spec, steps=steps)
    payload = {
        "basis": cfg.basis.label,
        "method": gate.method,
        "t_g": gate.t_g,
        "strength": gate.strength,
        "spectrum": np.sort(gate.gamma_n.spectrum()).tolist(),
        "physical": gate.gamma_n.is_physical(args.tol),
        "gamma_n": complex_matrix(gate.gamma_n.gamma),
        "u": complex_matrix(gate.u),
        "breakdown": [
            {"duration": duration, "gamma_l": complex_matrix(rm.gamma)}
            for duration, rm in gate.breakdown
        ],
    }
    write_json(args.out or "compile.json", payload)
    if not gate.gamma_n.is_physical(args.tol):
        print("compiled gate noise is not positive semi-definite", file=sys.stderr)
        return 1
    return 0


def cmd_simulate(args) -> int:
    from .validate import separated_comparison_curves

    cfg = load_config(args.config)
    if cfg.grid is None or not cfg.observables:
        raise ConfigError("simulate needs [output] grid and observables")
    start, stop, points = cfg.grid
    if start != 0.0:
        raise ConfigError("simulate grids must start at 0")
    gen = cfg.generator(t_op=stop, noise_scale=args.gamma)
    obs_ops = [cfg.basis.ops[cfg.basis.index(name)] for name in cfg.observables]
    curves = separated_comparison_curves(
        gen,
        cfg.initial_state(),
        obs_ops,
        stop,
        points,
        steps=args.steps or cfg.steps,
    )
    header = ["t"]
    for name in cfg.observables:
        header.extend([f"{name}_exact", f"{name}_separated"])
    rows = []
    for k, t in enumerate(curves["times"]):
        row = [t]
        for j in range(len(obs_ops)):
            row.extend([curves["exact"][j][k], curves["separated"][j][k]])
        rows.append(row)
    write_csv(args.out or "simulate.csv", header, rows)
    return 0


def cmd_validate(args) -> int:
    from .validate import run_all

    report = run_all()
    for line in report.summary_lines():
        print(line)
    write_json(args.out or "validation.json", report.to_dict())
    return 0 if report.passed else 1


def cmd_steady(args) -> int:
    cfg = load_config(args.config)
    omega, scale = _omega_and_scale(cfg)
    if cfg.noise is None or not cfg.noise.is_constant:
        raise ConfigError("steady needs a constant [noise] section")
    noise = cfg.noise if args.gamma is None else cfg.noise.scaled(args.gamma)
    gamma_d = noise.value(0.0)
    theta = args.theta if args.theta is not None else scale * cfg.t_op
    fixed = steady_state(gamma_d, omega)
    residuals = residual_components(gamma_d, omega, theta)
    payload = {
        "basis": cfg.basis.label,
        "theta": theta,
        "strength": fixed.strength,
        "spectrum": np.sort(fixed.spectrum()).tolist(),
        "physical": fixed.is_physical(args.tol),
        "steady": complex_matrix(fixed.gamma),
        "residuals": [
            {"eta": eta, "re": amp.real, "im": amp.imag, "abs": abs(amp)}
            for eta, amp in residuals
        ],
    }
    write_json(args.out or "steady.json", payload)
    return 0


def cmd_choi(args) -> int:
    cfg = load_config(args.config)
    omega, scale = _omega_and_scale(cfg)
    t_op, theta = _resolve_t_op(cfg, args.theta)
    choi, eigs = choi_of_transform(omega, t_op)
    payload = {
        "basis": cfg.basis.label,
        "t_op": t_op,
        "theta": theta,
        "size": int(choi.shape[0]),
        "spectrum": np.sort(eigs).tolist(),
        "min_eigenvalue": float(eigs.min()),
    }
    if choi.shape[0] <= 16:
        payload["matrix"] = complex_matrix(choi)
    write_json(args.out or "choi.json", payload)
    if eigs.min() < -args.tol:
        print("Choi matrix has a negative eigenvalue", file=sys.stderr)
        return 1
    return 0


def _parse_grid(text: str) -> np.ndarray:
    parts = [p.strip() for p in text.split(":")]
    if len(parts) != 3:
        raise ConfigError(f"--grid expects 'start:stop:points', got {text!r}")
    start, stop, points = float(parts[0]), float(parts[1]), int(parts[2])
    if points < 2:
        raise ConfigError("--grid needs at least two points")
    return np.linspace(start, stop, points)


def cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    grid = _parse_grid(args.grid)
    rows = []
    if args.param == "theta":
        omega, scale = _omega_and_scale(cfg)
        if scale == 0.0:
            raise ConfigError("theta sweeps need a nonzero Hamiltonian")
        if cfg.noise is None or not cfg.noise.is_constant:
            raise ConfigError("theta sweeps need a constant [noise] section")
        noise = cfg.noise if args.gamma is None else cfg.noise.scaled(args.gamma)
        gamma_d = noise.value(0.0)
        for theta in grid:
            if theta <= 0:
                raise ConfigError("theta values must be positive")
            res = separated_spectral(gamma_d, omega, theta / scale)
            rows.append(
                [theta, *np.sort(res.gamma_s.spectrum()).tolist(), res.strength]
            )
    else:
        steps = args.steps or cfg.steps or DEFAULT_STEPS
        for g in grid:
            gen = cfg.generator(noise_scale=float(g))
            res = separated(gen, cfg.t_op, route=args.route, steps=steps)
            rows.append([g, *np.sort(res.gamma_s.spectrum()).tolist(), res.strength])
    n_eigs = len(rows[0]) - 2
    header = [args.param, *[f"eig_{i}" for i in range(n_eigs)], "strength"]
    write_csv(args.out or "sweep.csv", header, rows)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sepnoise",
        description="Hardware Lindblad noise to circuit-level noise channels",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, config_required=True):
        if config_required:
            p.add_argument("--config", required=True, help="config file path")
        p.add_argument("--out", help="output file path")
        p.add_argument("--theta", type=float, help="operation angle override")
        p.add_argument("--gamma", type=float,
                       help="noise schedule scale factor override")
        p.add_argument("--steps", type=int, help="integrator step count")
        p.add_argument(
            "--route",
            choices=("integral", "ode", "spectral"),
            default="ode",
            help="separated-noise computation route",
        )
        p.add_argument("--tol", type=float, default=1e-9,
                       help="positivity tolerance for result checks")

    p = sub.add_parser("separate", help="separated noise of one operation")
    common(p)
    p.set_defaults(func=cmd_separate)

    p = sub.add_parser("compile", help="compile a gate spec")
    common(p)
    p.add_argument("--method", choices=("per_op", "monolithic"),
                   default="per_op")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("simulate", help="exact vs separated curves (CSV)")
    common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("validate", help="run the validation suite")
    common(p, config_required=False)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("steady", help="steady-state separated noise")
    common(p)
    p.set_defaults(func=cmd_steady)

    p = sub.add_parser("choi", help="Choi matrix of the shaping map")
    common(p)
    p.set_defaults(func=cmd_choi)

    p = sub.add_parser("sweep", help="spectrum sweep over theta or gamma")
    common(p)
    p.add_argument("--param", choices=("theta", "gamma"), default="theta")
    p.add_argument("--grid", required=True, help="start:stop:points")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ExprError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, NumericCheckFailed) as exc:
        print(f"numeric check failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
