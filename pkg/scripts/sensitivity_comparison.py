#!/usr/bin/env python3
"""Ramsey frequency uncertainty for the three sensing schemes on one lattice.

Compares a non-interacting GHZ register (Heisenberg limit), the same register
with the Ising couplings left on, and the fragmentation-protected layout in
which only a sublattice of probe spins stays dynamical inside a frozen
ancilla background.

Usage:
    python scripts/sensitivity_comparison.py --width 3 --height 3
"""

import argparse
import math

from hsfsense.couplings import sample_gaussian
from hsfsense.lattice import Lattice, canonical_partition
from hsfsense.sensing import SCHEMES, RamseyConfig, numeric_sensitivity


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--width", type=int, default=3)
    ap.add_argument("--height", type=int, default=3)
    ap.add_argument("--omega", type=float, default=0.05)
    ap.add_argument("--jbar", type=float, default=1.0)
    ap.add_argument("--sigma-ratio", type=float, default=0.3)
    ap.add_argument("--t-int", type=float, default=0.1)
    ap.add_argument("--t-all", type=float, default=10.0)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    lat = Lattice(args.width, args.height)
    part = canonical_partition(lat)
    c = sample_gaussian(lat, args.jbar, args.sigma_ratio * args.jbar, seed=args.seed)
    rc = RamseyConfig(omega=args.omega, t_int=args.t_int, t_all=args.t_all)

    hl_full = 1.0 / (lat.n_sites * math.sqrt(rc.t_int * rc.t_int * rc.repetitions))
    hl_probe = 1.0 / (part.n_probe * math.sqrt(rc.t_int * rc.t_int * rc.repetitions))
    print(f"# {lat.n_sites} sites, {part.n_probe} probes, M = {rc.repetitions}")
    print(f"# Heisenberg limit: full register {hl_full:.6g}, probe register {hl_probe:.6g}")
    print("scheme,delta_omega")
    for scheme in SCHEMES:
        delta = numeric_sensitivity(scheme, rc, lat, part, c)
        print(f"{scheme},{delta:.17g}")
    delta = numeric_sensitivity("hsf", rc, lat, part, c, ideal=True)
    print(f"hsf_ideal,{delta:.17g}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
