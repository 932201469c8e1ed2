import numpy as np
import pytest

from threshnet import (
    EdgeRule,
    Graph,
    LinkFn,
    ModelConfig,
    ParetoParams,
    ResourceLimitError,
    candidate_pairs,
    degree_sequence,
    generate,
    generate_naive,
)
from threshnet.model import Node


def _config(n, theta, seed=0, rule=None, pareto=None, d=3):
    pareto = pareto or ParetoParams(3, 1)
    rule = rule or EdgeRule.undirected(theta)
    return ModelConfig(n=n, d=d, pareto=pareto, rule=rule, seed=seed)


def test_single_node_has_no_edges():
    g = generate(_config(1, 0.0))
    assert g.n_edges == 0
    assert g.edges.shape == (0, 2)


def test_matches_naive_reference_spec_point():
    config = _config(2000, 12.6, seed=42)
    assert np.array_equal(generate(config).edges, generate_naive(config).edges)


@pytest.mark.parametrize("seed", [0, 1, 2])
@pytest.mark.parametrize(
    "rule",
    [
        EdgeRule.undirected(7.4),
        EdgeRule.directed(7.4, 1.0, 2.0),
        EdgeRule.link_function(2.0, 1.0, 2.0, LinkFn.exp()),
        EdgeRule.link_function(0.4, 0.5, 1.5, LinkFn.even_power(1)),
        EdgeRule.link_function(1.0, 1.0, 1.0, LinkFn.odd_power_plus_c(1, -0.2)),
    ],
    ids=["undirected", "directed", "exp", "evenpow", "oddpow"],
)
def test_pruned_equals_naive(rule, seed):
    config = _config(400, rule.theta, seed=seed, rule=rule)
    pruned = generate(config)
    naive = generate_naive(config)
    assert np.array_equal(pruned.edges, naive.edges)
    assert pruned.n_candidates <= naive.n_candidates


def test_worker_count_invariance():
    config = _config(5000, 17.1, seed=3)
    baseline = generate(config, workers=1)
    for workers in (2, 8):
        assert np.array_equal(generate(config, workers=workers).edges, baseline.edges)


def test_undirected_edges_canonical():
    g = generate(_config(1500, 11.4, seed=9))
    assert g.n_edges > 0
    assert np.all(g.edges[:, 0] < g.edges[:, 1])
    # lexicographic, duplicate-free
    keys = g.edges[:, 0] * g.n + g.edges[:, 1]
    assert np.all(np.diff(keys) > 0)


def test_directed_alpha_equals_beta_arcs_paired():
    rule = EdgeRule.directed(10.0, 1.5, 1.5)
    g = generate(_config(800, rule.theta, seed=4, rule=rule))
    arcs = {(int(i), int(j)) for i, j in g.edges}
    assert arcs, "expected some arcs"
    assert all((j, i) in arcs for i, j in arcs)


def test_theta_zero_yields_half_of_pairs():
    n = 300
    g = generate(_config(n, 0.0, seed=6))
    # dot >= 0 holds for half of all pairs in expectation
    pairs = n * (n - 1) / 2
    assert abs(g.n_edges - pairs / 2) < 4 * np.sqrt(pairs / 4)
    assert g.n_candidates == pairs


def _nodes_from_weights(weights):
    x = np.array([0.0, 0.0, 1.0])
    return [Node(i, w, x.copy()) for i, w in enumerate(weights)]


def test_candidate_pairs_theta_zero_all_pairs():
    nodes = _nodes_from_weights([3.0, 2.0, 1.0, 1.5])
    got = set(candidate_pairs(nodes, EdgeRule.undirected(0.0)))
    assert len(got) == 6


def test_candidate_pairs_prunes_light_pair():
    nodes = _nodes_from_weights([10.0, 1.0, 1.0])
    got = set(candidate_pairs(nodes, EdgeRule.undirected(5.0)))
    assert got == {(0, 1), (0, 2)}


def test_candidate_pairs_boundary_inclusive():
    nodes = _nodes_from_weights([2.0, 2.5, 1.0])
    got = set(candidate_pairs(nodes, EdgeRule.undirected(5.0)))
    assert (1, 0) in got or (0, 1) in got


def test_candidate_pairs_superset_of_edges():
    config = _config(3000, 14.4, seed=5)
    naive = generate_naive(config)
    nodes = [naive.node(i) for i in range(config.n)]
    yielded = set(candidate_pairs(nodes, config.rule))
    edges = {(int(i), int(j)) for i, j in naive.edges}
    normalized = {tuple(sorted(p)) for p in yielded}
    assert edges <= normalized
    assert len(yielded) < config.n ** 2 / 2 * 0.05


def test_candidate_pairs_negative_max_link():
    # max of h on [-1, 1] is negative: nothing can reach a positive threshold
    rule = EdgeRule.link_function(1.0, 1.0, 1.0, LinkFn.odd_power_plus_c(1, -2.0))
    nodes = _nodes_from_weights([5.0, 4.0, 3.0])
    assert list(candidate_pairs(nodes, rule)) == []


def test_yielded_pairs_subquadratic():
    pareto = ParetoParams(3, 1)
    fracs = []
    for n in (10 ** 4, 4 * 10 ** 4, 1.6 * 10 ** 5):
        n = int(n)
        g = generate(_config(n, n ** (1 / 3), seed=1, pareto=pareto))
        fracs.append(g.n_candidates / (n * n / 2))
    assert fracs[0] > fracs[1] > fracs[2]


def test_degree_sequence_trivial_cases():
    config = _config(3, 1.0)
    base = generate(config)
    empty = Graph(base.weights, base.directions, np.empty((0, 2), dtype=np.int64), False, config)
    assert np.array_equal(degree_sequence(empty), [0, 0, 0])
    triangle_edges = np.array([[0, 1], [0, 2], [1, 2]], dtype=np.int64)
    tri = Graph(base.weights, base.directions, triangle_edges, False, config)
    assert np.array_equal(degree_sequence(tri), [2, 2, 2])


def test_handshake_identities():
    g = generate(_config(2000, 9.0, seed=7))
    assert degree_sequence(g).sum() == 2 * g.n_edges
    rule = EdgeRule.directed(9.0, 1.0, 2.0)
    gd = generate(_config(2000, rule.theta, seed=7, rule=rule))
    out_deg, in_deg = degree_sequence(gd)
    assert out_deg.sum() == in_deg.sum() == gd.n_edges


def test_max_edge_guard_raises():
    with pytest.raises(ResourceLimitError):
        generate(_config(500, 0.0), max_edges=100)


def test_max_edge_guard_env(monkeypatch):
    monkeypatch.setenv("FTM_MAX_EDGES", "100")
    with pytest.raises(ResourceLimitError):
        generate(_config(500, 0.0))


def test_naive_rejects_large_n():
    from threshnet.errors import DomainError

    with pytest.raises(DomainError):
        generate_naive(_config(20001, 1.0))


def test_generation_stats_recorded():
    g = generate(_config(1000, 10.0, seed=2))
    assert g.wall_time > 0
    assert g.n_candidates >= g.n_edges


def test_determinism_same_seed():
    config = _config(1200, 10.6, seed=13)
    a = generate(config)
    b = generate(config)
    assert np.array_equal(a.edges, b.edges)
    assert np.array_equal(a.weights, b.weights)


def test_general_dimension_generation():
    config = _config(300, 2.0, seed=1, d=5)
    assert np.array_equal(generate(config).edges, generate_naive(config).edges)
