import numpy as np
import pytest

from hsfsense import hamiltonian as ham
from hsfsense import states
from hsfsense.couplings import sample_gaussian
from hsfsense.errors import FragmentError
from hsfsense.evolve import EvolutionEngine
from hsfsense.fragments import (
    UnionFind,
    adjacency_components,
    census_from_flip_predicate,
    fragment_of,
    refinement_check,
)


def bfs_components_oracle(h):
    """Independent BFS over the nonzero off-diagonal structure."""
    dim = h.shape[0]
    coo = h.tocoo()
    adj = {}
    for r, c in zip(coo.row, coo.col):
        if r != c:
            adj.setdefault(int(r), set()).add(int(c))
    label = [-1] * dim
    comps = []
    for start in range(dim):
        if label[start] != -1:
            continue
        comp = {start}
        stack = [start]
        label[start] = start
        while stack:
            cur = stack.pop()
            for nxt in adj.get(cur, ()):
                if label[nxt] == -1:
                    label[nxt] = start
                    comp.add(nxt)
                    stack.append(nxt)
        comps.append(comp)
    return comps


def test_union_find_basics():
    uf = UnionFind(5)
    uf.union(0, 1)
    uf.union(3, 4)
    assert uf.find(0) == uf.find(1)
    assert uf.find(2) not in (uf.find(0), uf.find(3))
    uf.union(1, 4)
    assert uf.find(0) == uf.find(3)


def test_census_matches_bfs_oracle(lat33):
    h = ham.build_h_eff_homogeneous(lat33, 1.0, 0.1)
    report = adjacency_components(h, lat33)
    comps = bfs_components_oracle(h)
    assert report.total_fragments == len(comps)
    assert report.max_fragment_size == max(len(c) for c in comps)
    assert report.frozen_states == sum(len(c) == 1 for c in comps)
    # per-state labels agree with the oracle partitioning
    for comp in comps:
        assert len({report.labels[s] for s in comp}) == 1


def test_3x3_homogeneous_census_golden(lat33):
    """Golden counts frozen from the BFS oracle; regression guard."""
    report = adjacency_components(ham.build_h_eff_homogeneous(lat33, 1.0, 0.1), lat33)
    assert report.total_fragments == 66
    assert report.max_fragment_size == 122
    assert report.frozen_states == 45
    # fragmentation proper: some DW sector splits into several mobile pieces
    assert any(
        sum(size >= 2 for size in sec.fragment_sizes) >= 2 for sec in report.sectors
    )


def test_predicate_census_equals_matrix_census(lat33):
    h = ham.build_h_eff_homogeneous(lat33, 1.0, 0.1)
    a = adjacency_components(h, lat33)
    b = census_from_flip_predicate(
        lat33, lambda i, s: ham.flip_allowed_homogeneous(lat33, i, s)
    )
    np.testing.assert_array_equal(a.labels, b.labels)
    assert a.total_fragments == b.total_fragments


def test_sector_mixing_matrix_rejected(lat33):
    with pytest.raises(FragmentError):
        adjacency_components(ham.build_h_omega(lat33, 0.3), lat33)


def test_inhomogeneous_refines_homogeneous(lat33, part33):
    h_hom = ham.build_h_eff_homogeneous(lat33, 1.0, 0.1)
    rep_hom = adjacency_components(h_hom, lat33)
    for seed in (1, 5, 9):
        for dth in (0.03, 0.1):
            c = sample_gaussian(lat33, 1.0, 0.3, seed=seed)
            h_in = ham.build_h_eff_inhomogeneous(lat33, part33, c, 0.1, dth)
            rep_in = adjacency_components(h_in, lat33)
            assert refinement_check(rep_hom, rep_in, h_hom, h_in)
            assert rep_in.total_fragments >= rep_hom.total_fragments


def test_refinement_check_rejects_swapped_arguments(lat33, part33):
    h_hom = ham.build_h_eff_homogeneous(lat33, 1.0, 0.1)
    c = sample_gaussian(lat33, 1.0, 0.3, seed=1)
    h_in = ham.build_h_eff_inhomogeneous(lat33, part33, c, 0.1, 0.03)
    rep_hom = adjacency_components(h_hom, lat33)
    rep_in = adjacency_components(h_in, lat33)
    assert rep_in.total_fragments > rep_hom.total_fragments  # strict refinement here
    assert not refinement_check(rep_in, rep_hom, h_in, h_hom)


def test_fragment_of_preserves_ancilla_pattern(lat33, part33, dis33):
    h = ham.build_h_eff_inhomogeneous(lat33, part33, dis33, 0.1, 0.1)
    psi = states.embed(states.ghz_x(part33.n_probe), part33, lat33)
    frag = fragment_of(psi, h)
    frozen = states.frozen_bits(part33)
    amask = 0
    for a in part33.ancilla_sites:
        amask |= 1 << a
    assert all((s & amask) == frozen for s in frag)


def test_evolution_never_leaks_out_of_fragment(lat33, part33, dis33):
    h = ham.build_h_eff_inhomogeneous(lat33, part33, dis33, 0.1, 0.1)
    psi = states.embed(states.ghz_x(part33.n_probe), part33, lat33)
    frag = fragment_of(psi, h)
    eng = EvolutionEngine(h)
    outside = np.array(sorted(set(range(1 << 9)) - frag))
    for t in (0.5, 4.0):
        assert np.linalg.norm(eng.evolve(psi, t)[outside]) < 1e-12


def test_report_csv_shape(lat33):
    report = adjacency_components(ham.build_h_eff_homogeneous(lat33, 1.0, 0.1), lat33)
    lines = report.to_csv(lat33).strip().splitlines()
    assert lines[0] == "dw_sector,fragment_id,size,is_frozen"
    assert len(lines) == 1 + report.total_fragments
    sizes = [int(line.split(",")[2]) for line in lines[1:]]
    assert sum(sizes) == 1 << 9
