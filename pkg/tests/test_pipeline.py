import math
import random
from fractions import Fraction

import pytest

from pathcover.generators import (
    GenSpec,
    degree_from_ratio,
    random_bipartite_regular,
    random_regular,
)
from pathcover.graph import Graph
from pathcover.hamilton import Path
from pathcover.pipeline import (
    CycleSet,
    DegenerateParameterError,
    PathCover,
    PipelineConfig,
    ReservoirError,
    chernoff_lower,
    chernoff_upper,
    connect_paths,
    cycle_cover,
    path_cover,
    path_cover_bipartite,
    paths_limit,
    paths_limit_bipartite,
    reservoir,
    verify_cover,
)


def complete(n):
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


# --------------------------------------------------------------- configuration


def test_derived_chain():
    cfg = PipelineConfig.derive(0.3, 0.1)
    assert cfg.d == pytest.approx(0.1 * 0.3 / 9)
    assert cfg.delta == pytest.approx(cfg.d / 2)
    assert cfg.beta == pytest.approx(3 * cfg.d / 0.3)
    assert cfg.gamma == pytest.approx(0.025)
    assert 0 < cfg.eps <= cfg.d / 6 + 1e-12


def test_config_invariants_enforced():
    with pytest.raises(ValueError):
        PipelineConfig.derive(0.3, 0.1, eps=0.5)  # eps > d/6
    with pytest.raises(ValueError):
        PipelineConfig.derive(0.3, 0.1, gamma=0.3)  # gamma > 1/4
    with pytest.raises(ValueError):
        PipelineConfig.derive(0.0, 0.1)


def test_with_alpha_rederives():
    cfg = PipelineConfig.derive(0.3, 0.1)
    half = cfg.with_alpha(0.05)
    assert half.d == pytest.approx(cfg.d / 2)
    assert half.seed == cfg.seed


def test_limits_use_decimal_c():
    assert paths_limit(0.3) == 3
    assert paths_limit(0.45) == 2
    assert paths_limit(0.55) == 1
    assert paths_limit_bipartite(0.3) == 1
    assert paths_limit_bipartite(0.25) == 2


# -------------------------------------------------------------------- chernoff


def test_chernoff_formulas_exact():
    assert chernoff_upper(30, 0.5, 5) == pytest.approx(math.exp(-25 / (30 + 5 / 3)), rel=1e-15)
    assert chernoff_lower(30, 0.5, 5) == pytest.approx(math.exp(-5 / 6), rel=1e-15)


def test_chernoff_domain():
    for bad in [(0, 0.5, 1), (5, 0.0, 1), (5, 1.0, 1), (5, 0.5, 0)]:
        with pytest.raises(ValueError):
            chernoff_upper(*bad)
        with pytest.raises(ValueError):
            chernoff_lower(*bad)


# ------------------------------------------------------------------- reservoir


def test_reservoir_gamma_zero_degenerate():
    with pytest.raises(DegenerateParameterError):
        reservoir(complete(20), gamma=0.0, eps=0.5)


def test_reservoir_tiny_window_degenerate():
    # gamma*n = 3 with a hairline window around it: no integer inside
    with pytest.raises(DegenerateParameterError):
        reservoir(complete(30), gamma=0.1, eps=1e-9)


def test_reservoir_eps_one_succeeds():
    g = complete(60)
    r = reservoir(g, gamma=0.2, eps=0.999, seed=1)
    assert 0 < len(r) < 24  # open window (0, 2*gamma*n)


def test_reservoir_windows_audited():
    g = complete(120)
    gamma, eps = 0.15, 0.5
    r = reservoir(g, gamma, eps, seed=3)
    n, k = 120, 119
    assert (1 - eps) * gamma * n < len(r) < (1 + eps) * gamma * n
    rset = set(r)
    for v in range(n):
        deg = len(g.neighbors(v) & rset)
        assert (1 - eps) * gamma * k < deg < (1 + eps) * gamma * k


def test_reservoir_deterministic():
    g = complete(80)
    assert reservoir(g, 0.2, 0.5, seed=9) == reservoir(g, 0.2, 0.5, seed=9)


def test_reservoir_requires_regular():
    with pytest.raises(ValueError):
        reservoir(Graph(3, [(0, 1)]), 0.2, 0.5)


# ---------------------------------------------------------------- connect loop


def test_connect_two_paths_through_common_neighbor():
    # paths 0-1 and 2-3; reservoir {4}; 4 adjacent to the chosen ends 0 and 2
    g = Graph(5, [(0, 1), (2, 3), (0, 4), (2, 4)])
    paths = [Path((0, 1)), Path((2, 3))]
    merged, r_left, log = connect_paths(g, paths, {4}, limit=1)
    assert len(merged) == 1 and len(merged[0]) == 5
    merged[0].validate(g)
    assert r_left == frozenset()
    assert log == [(0, 1, 4)]


def test_connect_no_common_neighbor_is_identity():
    g = Graph(6, [(0, 1), (2, 3), (0, 4), (2, 5)])
    paths = [Path((0, 1)), Path((2, 3))]
    merged, r_left, log = connect_paths(g, paths, {4, 5}, limit=1)
    assert len(merged) == 2 and log == []
    assert r_left == frozenset({4, 5})


def test_connect_below_limit_is_identity():
    g = complete(6)
    paths = [Path((0, 1, 2))]
    merged, r_left, log = connect_paths(g, paths, {3, 4}, limit=2)
    assert merged == paths and log == []


def test_each_merge_reduces_count_by_one():
    g = complete(12)
    paths = [Path((i,)) for i in range(6)]
    merged, _, log = connect_paths(g, paths, {6, 7, 8, 9, 10, 11}, limit=1)
    assert len(merged) == 6 - len(log)
    for p in merged:
        p.validate(g)


# ------------------------------------------------------------------ cover audit


def test_verify_valid_hamiltonian_path():
    g = complete(5)
    cover = PathCover([Path((0, 1, 2, 3, 4))], frozenset())
    assert verify_cover(g, cover, max_count=1, max_uncovered=0).ok


def test_verify_catches_shared_vertex():
    g = complete(5)
    cover = PathCover([Path((0, 1)), Path((1, 2))], frozenset({3, 4}))
    chk = verify_cover(g, cover)
    assert not chk.ok
    assert any(i.name == "disjoint" and not i.ok for i in chk.items)


def test_verify_catches_non_edge():
    g = Graph(4, [(0, 1)])
    cover = PathCover([Path((0, 1, 2))], frozenset({3}))
    chk = verify_cover(g, cover)
    assert any(i.name == "adjacency" and not i.ok for i in chk.items)


def test_verify_catches_count_overflow():
    g = complete(4)
    cover = PathCover([Path((0,)), Path((1,)), Path((2, 3))], frozenset())
    chk = verify_cover(g, cover, max_count=2)
    assert any(i.name == "count" and not i.ok for i in chk.items)


def test_verify_catches_inconsistent_uncovered():
    g = complete(4)
    cover = PathCover([Path((0, 1))], frozenset({2}))  # vertex 3 unaccounted
    chk = verify_cover(g, cover)
    assert any(i.name == "uncovered-consistent" and not i.ok for i in chk.items)


# ----------------------------------------------------------------- cycle cover


def test_cycle_cover_rejects_degree_window_violation():
    g = Graph(6, [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (1, 3)])
    cfg = PipelineConfig.derive(0.5, 0.2)
    with pytest.raises(ValueError):
        cycle_cover(g, cfg)  # degrees 2 and 3 cannot sit in a tight window


def test_cycle_cover_complete_graph_uses_regularity_route():
    n = 240
    g = complete(n)
    cfg = PipelineConfig.derive((n - 1) / n, 0.1, seed=2)
    cycset, rep = cycle_cover(g, cfg)
    assert rep.method == "regularity-pipeline"
    assert rep.success
    assert len(cycset.cycles) <= rep.t
    assert len(cycset.uncovered) <= 24
    assert verify_cover(g, cycset, max_count=rep.t, max_uncovered=24).ok


def test_cycle_cover_random_regular_falls_back_but_covers():
    n, c = 150, 0.4
    k = degree_from_ratio(n, c)
    g = random_regular(GenSpec(n, k, "random-regular", seed=8))
    cfg = PipelineConfig.derive(c, 0.1, seed=8)
    cycset, rep = cycle_cover(g, cfg, strict_window=False)
    assert len(cycset.uncovered) <= 15
    assert verify_cover(g, cycset, max_uncovered=15).ok


def test_cycle_cover_random_sweep_covers_most():
    # 0.9n coverage with at most t cycles on mid-density random instances
    n, c = 600, 0.3
    k = degree_from_ratio(n, c)
    ok = 0
    for seed in range(12):
        g = random_regular(GenSpec(n, k, "random-regular", seed=seed))
        cycset, rep = cycle_cover(g, PipelineConfig.derive(c, 0.1, seed=seed), strict_window=False)
        chk = verify_cover(g, cycset, max_count=max(rep.t, 4), max_uncovered=60)
        ok += chk.ok
    assert ok >= 11


# ------------------------------------------------------------------ path cover


def test_path_cover_validates_c_against_instance():
    g = complete(8)  # 7-regular
    cfg = PipelineConfig.derive(0.5, 0.1)  # implies 4-regular
    with pytest.raises(ValueError):
        path_cover(g, cfg)


def test_path_cover_complete_graph_regularity_route():
    n = 240
    g = complete(n)
    cfg = PipelineConfig.derive((n - 1) / n, 0.1, seed=4)
    cover, rep = path_cover(g, cfg)
    assert rep.method == "regularity-pipeline"
    assert rep.success
    assert len(cover.paths) == 1
    assert verify_cover(g, cover, max_count=1, max_uncovered=24).ok


def test_path_cover_dirac_regime_single_path():
    n, c = 120, 0.55
    k = degree_from_ratio(n, c)
    g = random_regular(GenSpec(n, k, "random-regular", seed=6))
    cover, rep = path_cover(g, PipelineConfig.derive(c, 0.1, seed=6))
    assert len(cover.paths) == 1
    assert verify_cover(g, cover, max_count=1, max_uncovered=12).ok


def test_path_cover_mid_density():
    n, c = 150, 0.3
    k = degree_from_ratio(n, c)
    g = random_regular(GenSpec(n, k, "random-regular", seed=7))
    cover, rep = path_cover(g, PipelineConfig.derive(c, 0.1, seed=7))
    assert verify_cover(g, cover, max_count=3, max_uncovered=15).ok


def test_path_cover_bipartite_complete():
    n = 60
    g = Graph(
        n,
        [(i, 30 + j) for i in range(30) for j in range(30)],
        bipartition=(range(30), range(30, 60)),
    )
    cfg = PipelineConfig.derive(0.5, 0.1, seed=3)
    cover, rep = path_cover_bipartite(g, cfg)
    assert len(cover.paths) == 1
    assert verify_cover(g, cover, max_count=1, max_uncovered=6).ok


def test_path_cover_bipartite_random():
    n, c = 120, 0.3
    k = degree_from_ratio(n, c)
    g = random_bipartite_regular(GenSpec(n, k, "random-bipartite-regular", seed=11))
    cover, rep = path_cover_bipartite(g, PipelineConfig.derive(c, 0.1, seed=11))
    assert verify_cover(g, cover, max_count=1, max_uncovered=12).ok


def test_path_cover_bipartite_connections_use_reservoir_y_side():
    n, c = 200, 0.3
    k = degree_from_ratio(n, c)
    g = random_bipartite_regular(GenSpec(n, k, "random-bipartite-regular", seed=13))
    cover, rep = path_cover_bipartite(g, PipelineConfig.derive(c, 0.1, seed=13))
    _, y = g.bipartition
    for (_, _, w) in rep.merges:
        assert w in rep.reservoir_vertices and w in y


def test_path_cover_bipartite_rejects_plain_graph():
    g = complete(8)
    cfg = PipelineConfig.derive(7 / 8, 0.1)
    with pytest.raises(ValueError):
        path_cover_bipartite(g, cfg)


def test_out_of_regime_disjoint_cliques_rejected():
    from pathcover.generators import extremal_family

    g = extremal_family(GenSpec(40, 3, "disjoint-cliques"))  # k=3 fixed, not c*n
    cfg = PipelineConfig.derive(0.5, 0.1)
    with pytest.raises(ValueError):
        path_cover(g, cfg)


def test_run_report_kv_text():
    n = 60
    g = complete(n)
    cover, rep = path_cover(g, PipelineConfig.derive((n - 1) / n, 0.2, seed=1))
    text = rep.to_kv_text()
    assert "method=" in text and "uncovered=" in text and "notes=" in text
