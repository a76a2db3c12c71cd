"""Census of dynamically disconnected subspaces of the constrained dynamics.

Basis states are vertices; nonzero off-diagonal matrix elements of a
constrained builder are edges.  Connected components are found by
union-find and grouped by domain-wall sector, which is well defined because
the builders commute with the domain-wall number.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import FragmentError
from .hamiltonian import dw_diagonal
from .lattice import Lattice


class UnionFind:
    """Array-backed union-find with path halving and union by size."""

    def __init__(self, n: int):
        self.parent = np.arange(n, dtype=np.int64)
        self.size = np.ones(n, dtype=np.int64)

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return int(x)

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]


@dataclass(frozen=True)
class SectorCensus:
    sector_dw: int
    fragment_count: int
    fragment_sizes: tuple[int, ...]  # sorted ascending
    frozen_state_count: int  # size-1 fragments


@dataclass(frozen=True)
class FragmentReport:
    n_sites: int
    sectors: tuple[SectorCensus, ...]
    labels: np.ndarray  # per basis state: minimum state index of its fragment

    @property
    def total_fragments(self) -> int:
        return sum(s.fragment_count for s in self.sectors)

    @property
    def max_fragment_size(self) -> int:
        return max(max(s.fragment_sizes) for s in self.sectors)

    @property
    def frozen_states(self) -> int:
        return sum(s.frozen_state_count for s in self.sectors)

    def summary(self) -> dict:
        return {
            "total_fragments": self.total_fragments,
            "max_fragment_size": self.max_fragment_size,
            "frozen_states": self.frozen_states,
        }

    def to_csv(self, lattice: Lattice) -> str:
        dw = dw_diagonal(lattice)
        lines = ["dw_sector,fragment_id,size,is_frozen"]
        roots, counts = np.unique(self.labels, return_counts=True)
        for root, size in zip(roots, counts):
            lines.append(f"{dw[root]},{root},{size},{int(size == 1)}")
        return "\n".join(lines) + "\n"


def _edges_of(h_eff: sp.spmatrix):
    coo = sp.triu(h_eff.tocoo(), k=1)
    keep = coo.data != 0
    return coo.row[keep], coo.col[keep]


def adjacency_components(h_eff: sp.spmatrix, lattice: Lattice) -> FragmentReport:
    """Connected-component census of a constrained Hamiltonian, by DW sector.

    Raises FragmentError if any off-diagonal element connects states with
    different domain-wall numbers.
    """
    dim = h_eff.shape[0]
    if dim != (1 << lattice.n_sites):
        raise FragmentError("operator dimension does not match the lattice")
    dw = dw_diagonal(lattice)
    rows, cols = _edges_of(h_eff)
    if np.any(dw[rows] != dw[cols]):
        raise FragmentError("operator mixes domain-wall sectors; not a constrained builder output")

    uf = UnionFind(dim)
    for a, b in zip(rows, cols):
        uf.union(int(a), int(b))
    roots = np.array([uf.find(s) for s in range(dim)], dtype=np.int64)

    # label each fragment by its minimum member state
    labels = np.zeros(dim, dtype=np.int64)
    order = np.argsort(roots, kind="stable")
    sorted_roots = roots[order]
    boundaries = np.nonzero(np.diff(sorted_roots))[0] + 1
    for chunk in np.split(order, boundaries):
        labels[chunk] = chunk.min()

    sectors = []
    for sector in np.unique(dw):
        in_sector = labels[dw == sector]
        _, sizes = np.unique(in_sector, return_counts=True)
        sizes = np.sort(sizes)
        sectors.append(
            SectorCensus(
                sector_dw=int(sector),
                fragment_count=len(sizes),
                fragment_sizes=tuple(int(s) for s in sizes),
                frozen_state_count=int(np.sum(sizes == 1)),
            )
        )
    return FragmentReport(n_sites=lattice.n_sites, sectors=tuple(sectors), labels=labels)


def census_from_flip_predicate(lattice: Lattice, flip_allowed) -> FragmentReport:
    """Memory-lean census: edges generated on the fly from a flip predicate.

    ``flip_allowed(site, state)`` must say whether sigma^x may act on
    ``site`` in basis state ``state``.  Avoids materializing the operator.
    """
    n = lattice.n_sites
    dim = 1 << n
    uf = UnionFind(dim)
    for s in range(dim):
        for i in range(n):
            if flip_allowed(i, s):
                uf.union(s, s ^ (1 << i))
    roots = np.array([uf.find(s) for s in range(dim)], dtype=np.int64)
    labels = np.zeros(dim, dtype=np.int64)
    order = np.argsort(roots, kind="stable")
    boundaries = np.nonzero(np.diff(roots[order]))[0] + 1
    for chunk in np.split(order, boundaries):
        labels[chunk] = chunk.min()
    dw = dw_diagonal(lattice)
    sectors = []
    for sector in np.unique(dw):
        in_sector = labels[dw == sector]
        _, sizes = np.unique(in_sector, return_counts=True)
        sizes = np.sort(sizes)
        sectors.append(
            SectorCensus(int(sector), len(sizes), tuple(int(x) for x in sizes), int(np.sum(sizes == 1)))
        )
    return FragmentReport(n_sites=n, sectors=tuple(sectors), labels=labels)


def refinement_check(
    homogeneous_report: FragmentReport,
    inhomogeneous_report: FragmentReport,
    h_hom: sp.spmatrix,
    h_inhom: sp.spmatrix,
) -> bool:
    """True iff the inhomogeneous partition refines the homogeneous one.

    Checked both ways: every inhomogeneous fragment maps into a single
    homogeneous fragment, and the inhomogeneous edge set is a subset of the
    homogeneous edge set.
    """
    hom, inhom = homogeneous_report.labels, inhomogeneous_report.labels
    # partition refinement: the homogeneous label must be constant on each
    # inhomogeneous fragment
    for root in np.unique(inhom):
        members = np.nonzero(inhom == root)[0]
        if np.unique(hom[members]).size != 1:
            return False
    ri, ci = _edges_of(h_inhom)
    hom_edges = set(zip(*map(lambda a: a.tolist(), _edges_of(h_hom))))
    return all((a, b) in hom_edges for a, b in zip(ri.tolist(), ci.tolist()))


def fragment_of(state: np.ndarray, h_eff: sp.spmatrix, tol: float = 1e-12) -> set[int]:
    """All basis states reachable from the support of ``state`` under h_eff.

    Population outside this set stays exactly zero along any h_eff
    trajectory starting from ``state``.
    """
    support = [int(s) for s in np.nonzero(np.abs(state) > tol)[0]]
    adj = h_eff.tocsr()
    seen: set[int] = set(support)
    stack = list(support)
    while stack:
        s = stack.pop()
        row = adj.getrow(s)
        for j, v in zip(row.indices, row.data):
            if j != s and v != 0 and int(j) not in seen:
                seen.add(int(j))
                stack.append(int(j))
    return seen
