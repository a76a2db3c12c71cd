"""Universal error bound for the decoupled probe dynamics.

The analytic gap j_gap lower-bounds the numerically enumerated single-flip
gap delta_pr_numeric, and the bound right-hand side limits |epsilon(t)|, the
gap between full and effective projector expectations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import hamiltonian as ham
from . import states
from .couplings import CouplingMap
from .errors import BoundError
from .evolve import epsilon_deviation_grid
from .lattice import Lattice, SitePartition


@dataclass(frozen=True)
class BoundReport:
    j_g: float
    delta_pr: float
    t_grid: np.ndarray
    epsilon_values: np.ndarray
    rhs_values: np.ndarray
    satisfied: bool
    vacuous: bool
    max_ratio: float

    def to_csv(self) -> str:
        lines = ["t,epsilon,rhs,margin"]
        for t, e, r in zip(self.t_grid, self.epsilon_values, self.rhs_values):
            lines.append(
                f"{format(float(t), '.17g')},{format(float(e), '.17g')},"
                f"{format(float(r), '.17g')},{format(float(r - abs(e)), '.17g')}"
            )
        return "\n".join(lines) + "\n"

    def summary(self) -> dict:
        return {
            "j_g": self.j_g,
            "delta_pr": self.delta_pr,
            "satisfied": self.satisfied,
            "max_ratio": self.max_ratio,
        }


def j_gap(lattice: Lattice, partition: SitePartition, couplings: CouplingMap) -> float:
    """min over ancilla sites of [4 jbar - sum_j 2|delta_ij|]; positive for valid maps."""
    best = math.inf
    for i in partition.ancilla_sites:
        spread = sum(2.0 * abs(couplings.bond_delta(i, j)) for j in lattice.neighbors(i))
        best = min(best, 4.0 * couplings.jbar - spread)
    if best <= 0:
        raise BoundError(f"j_gap={best} is nonpositive; coupling disorder violates 2|delta| < jbar")
    return best


def delta_pr_numeric(lattice: Lattice, partition: SitePartition, couplings: CouplingMap) -> float:
    """Exact minimum |diagonal energy change| for one ancilla flip.

    Enumerates every probe configuration over the frozen ancilla pattern and
    every single ancilla flip, using the diagonal of the shifted Hamiltonian
    without the transverse field.  Always >= j_gap.
    """
    diag = ham.ising_diagonal(couplings) + ham.shift_diagonal(partition, couplings)
    base = states.frozen_bits(partition)
    probe_order = partition.probe_order()
    best = math.inf
    for p in range(1 << len(probe_order)):
        s = base
        for k, site in enumerate(probe_order):
            if (p >> k) & 1:
                s |= 1 << site
        e0 = diag[s]
        for a in partition.ancilla_sites:
            best = min(best, abs(diag[s ^ (1 << a)] - e0))
    return float(best)


def error_bound_rhs(n: int, omega: float, j_g: float, t: float) -> float:
    """2 n omega / j_g + 2 (e^(n omega / j_g) - 1) n omega t."""
    if j_g <= 0:
        raise BoundError(f"j_g must be positive, got {j_g}")
    if n < 1 or omega < 0 or t < 0:
        raise BoundError("need n >= 1, omega >= 0, t >= 0")
    x = n * omega / j_g
    return 2.0 * x + 2.0 * math.expm1(x) * n * omega * t


def check_connectivity_condition(
    lattice: Lattice, partition: SitePartition, couplings: CouplingMap, omega: float = 1e-3
) -> bool:
    """Numeric check that the perturbation connects the frozen subspace only
    to single-ancilla-flip states (probe flips stay inside the subspace)."""
    h_omega = ham.build_h_omega(lattice, omega)
    base = states.frozen_bits(partition)
    probe_order = partition.probe_order()
    ancilla_mask = 0
    for a in partition.ancilla_sites:
        ancilla_mask |= 1 << a
    for p in range(1 << len(probe_order)):
        s = base
        for k, site in enumerate(probe_order):
            if (p >> k) & 1:
                s |= 1 << site
        row = h_omega.getcol(s).tocoo().row
        for target in row:
            diff = int(target) ^ s
            if diff & ancilla_mask and bin(diff).count("1") != 1:
                return False
    return True


def verify_bound(
    lattice: Lattice,
    partition: SitePartition,
    couplings: CouplingMap,
    omega: float,
    t_grid,
    use_delta_pr: bool = False,
) -> BoundReport:
    """Full-simulation check that |epsilon(t)| <= rhs(t) on the grid.

    The denominator defaults to the analytic j_gap; set ``use_delta_pr`` for
    the sharper enumerated gap.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    n = lattice.n_sites
    jg = j_gap(lattice, partition, couplings)
    dpr = delta_pr_numeric(lattice, partition, couplings)
    gap = dpr if use_delta_pr else jg

    if omega == 0.0:
        eps = np.zeros_like(t_grid)
        rhs = np.zeros_like(t_grid)
    else:
        psi = states.embed(states.ghz_x(partition.n_probe), partition, lattice)
        proj = states.probe_projector(
            states.ghz_x(partition.n_probe, "primed"), partition, lattice
        )
        h_total = ham.build_h_total(lattice, partition, couplings, omega)
        h_eff = ham.build_h_probe_omega(partition, lattice, omega)
        eps = epsilon_deviation_grid(psi, h_total, h_eff, proj, t_grid)
        rhs = np.array([error_bound_rhs(n, omega, gap, t) for t in t_grid])

    satisfied = bool(np.all(np.abs(eps) <= rhs + 1e-14))
    vacuous = bool(omega != 0.0 and np.all(rhs >= 1.0))
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(rhs > 0, np.abs(eps) / np.where(rhs > 0, rhs, 1.0), 0.0)
    return BoundReport(
        j_g=jg,
        delta_pr=dpr,
        t_grid=t_grid,
        epsilon_values=np.asarray(eps),
        rhs_values=rhs,
        satisfied=satisfied,
        vacuous=vacuous,
        max_ratio=float(np.max(ratios)) if len(t_grid) else 0.0,
    )
