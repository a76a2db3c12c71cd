"""Batch command-line front end.

Every command reads a ``key = value`` config file, runs one reproducible
experiment, and writes a CSV (atomically: temp file + rename).  Exit codes:
0 success, 2 config error, 3 numeric or invariant failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

from .config import COMMANDS, RunConfig, parse_config
from .errors import ConfigError


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _build_system(config: RunConfig):
    from . import couplings as cp
    from .lattice import Boundary, Lattice, canonical_partition, parse_layout

    lattice = Lattice(
        config.lattice_width,
        config.lattice_height,
        Boundary.FIXED_DOWN_FRAME if config.lattice_boundary == "frame" else Boundary.OPEN,
    )
    if config.partition == "canonical":
        partition = canonical_partition(lattice)
    elif config.partition.startswith("explicit:"):
        with open(config.partition.split(":", 1)[1]) as fh:
            partition = parse_layout(fh.read(), lattice)
    else:
        raise ConfigError(f"partition must be 'canonical' or 'explicit:<file>', got {config.partition!r}")
    if config.couplings_file:
        with open(config.couplings_file) as fh:
            couplings = cp.from_csv(lattice, config.couplings_jbar, fh.read())
    elif config.couplings_sigma > 0:
        couplings = cp.sample_gaussian(
            lattice, config.couplings_jbar, config.couplings_sigma, config.couplings_seed
        )
    else:
        couplings = cp.homogeneous(lattice, config.couplings_jbar)
    return lattice, partition, couplings


def _cmd_fidelity(config: RunConfig) -> str:
    import numpy as np

    from . import hamiltonian as ham
    from . import states
    from .evolve import dynamical_fidelity_grid

    lattice, _, couplings = _build_system(config)
    psi0 = states.ghz_x(lattice.n_sites)
    h_ideal = ham.build_h_omega(lattice, config.omega)
    h_actual = ham.build_h_tfim(lattice, couplings, config.omega)
    ts = np.linspace(0.0, config.t_max, config.t_points)
    fd = dynamical_fidelity_grid(psi0, h_ideal, h_actual, ts)
    lines = ["t,fidelity"]
    lines += [f"{_fmt(t)},{_fmt(v)}" for t, v in zip(ts, fd)]
    return "\n".join(lines) + "\n"


def _cmd_sweep(config: RunConfig) -> str:
    from .sensing import SCHEMES, RamseyConfig, numeric_sensitivity

    lattice, partition, couplings = _build_system(config)
    rc = RamseyConfig(omega=config.omega, t_int=config.t_int, t_all=config.t_all)
    schemes = SCHEMES if config.sweep_scheme == "all" else (config.sweep_scheme,)
    n = lattice.n_sites
    lines = ["scheme,N,jbar,omega,t_int,delta_omega"]
    for scheme in schemes:
        delta = numeric_sensitivity(
            scheme, rc, lattice, partition, couplings, ideal=config.sweep_ideal
        )
        lines.append(
            f"{scheme},{n},{_fmt(couplings.jbar)},{_fmt(config.omega)},"
            f"{_fmt(config.t_int)},{_fmt(delta)}"
        )
    return "\n".join(lines) + "\n"


def _cmd_zeno(config: RunConfig) -> str:
    from .sensing import ZenoParams, zeno_uncertainty

    lines = ["N,tau,beta,gamma,delta_omega"]
    for n in config.zeno_n_values:
        for beta in config.zeno_beta_values:
            for gamma in config.zeno_gamma_values:
                params = ZenoParams(
                    tau=config.zeno_tau,
                    beta=beta,
                    gamma=gamma,
                    omega0=config.zeno_omega0,
                    jbar=config.couplings_jbar,
                )
                delta = zeno_uncertainty(params, n, config.zeno_t_all)
                lines.append(f"{n},{_fmt(config.zeno_tau)},{_fmt(beta)},{_fmt(gamma)},{_fmt(delta)}")
    return "\n".join(lines) + "\n"


def _cmd_fragments(config: RunConfig) -> tuple[str, dict]:
    from . import hamiltonian as ham
    from .fragments import adjacency_components

    lattice, partition, couplings = _build_system(config)
    if config.couplings_sigma > 0 or config.couplings_file:
        h_eff = ham.build_h_eff_inhomogeneous(
            lattice, partition, couplings, config.omega, config.delta_th
        )
    else:
        h_eff = ham.build_h_eff_homogeneous(lattice, couplings.jbar, config.omega)
    report = adjacency_components(h_eff, lattice)
    return report.to_csv(lattice), report.summary()


def _cmd_bound(config: RunConfig) -> tuple[str, dict]:
    import numpy as np

    from .bound import verify_bound

    lattice, partition, couplings = _build_system(config)
    ts = np.linspace(0.0, config.t_max, config.t_points)
    report = verify_bound(lattice, partition, couplings, config.omega, ts)
    return report.to_csv(), report.summary()


def _cmd_montecarlo(config: RunConfig) -> str:
    import numpy as np

    from .sensing import RamseyConfig, monte_carlo_estimator

    lattice, partition, _ = _build_system(config)
    rc = RamseyConfig(omega=config.omega, t_int=config.t_int, t_all=config.t_all)
    n_probe = partition.n_probe
    p_true = 0.5 * (1.0 + np.sin(n_probe * config.omega * config.t_int))
    lines = ["trial,omega_est,sq_error"]
    for trial in range(config.mc_trials):
        est, _ = monte_carlo_estimator(
            rc, p_true, n_probe, config.mc_repetitions, seed=(config.seed, trial)
        )
        lines.append(f"{trial},{_fmt(est)},{_fmt((est - config.omega) ** 2)}")
    return "\n".join(lines) + "\n"


def run(config: RunConfig) -> int:
    """Execute one command; returns the process exit status."""
    if config.command not in COMMANDS:
        raise ConfigError(f"command must be one of {COMMANDS}, got {config.command!r}")
    if not config.out:
        raise ConfigError("no output path: set 'out' in the config or pass --out")
    summary = None
    if config.command == "fidelity":
        text = _cmd_fidelity(config)
    elif config.command == "sweep":
        text = _cmd_sweep(config)
    elif config.command == "zeno":
        text = _cmd_zeno(config)
    elif config.command == "fragments":
        text, summary = _cmd_fragments(config)
    elif config.command == "bound":
        text, summary = _cmd_bound(config)
    else:
        text = _cmd_montecarlo(config)
    _write_atomic(config.out, text)
    if summary is not None:
        print(json.dumps(summary, sort_keys=True))
    return 0


def _limit_threads() -> None:
    cap = os.environ.get("HSF_THREADS")
    if not cap:
        return
    for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ.setdefault(var, cap)


def main(argv=None) -> int:
    _limit_threads()
    parser = argparse.ArgumentParser(prog="hsfsense", description=__doc__)
    parser.add_argument("--config", help="path to a key = value config file")
    parser.add_argument("--command", choices=COMMANDS)
    parser.add_argument("--out", help="output CSV path")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--scheme", choices=("ghz_free", "ghz_interacting", "hsf"))
    parser.add_argument("--ideal", action="store_true", help="sweep: evolve under the decoupled probe field")
    args = parser.parse_args(argv)

    try:
        if args.config:
            with open(args.config) as fh:
                config = parse_config(fh.read())
        else:
            config = RunConfig()
        if args.command:
            config.command = args.command
        if args.out:
            config.out = args.out
        if args.seed is not None:
            config.seed = args.seed
            config.couplings_seed = args.seed
        if args.scheme:
            config.sweep_scheme = args.scheme
        if args.ideal:
            config.sweep_ideal = True
        return run(config)
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # numeric/invariant failure
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
