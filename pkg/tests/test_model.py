import numpy as np
import pytest

from threshnet import (
    DimensionError,
    DomainError,
    EdgeRule,
    LinkFn,
    ModelConfig,
    Node,
    ParetoParams,
    edge_exists,
    sample_direction,
    sample_node,
    sample_node_table,
    sample_weight,
)
from threshnet.streams import SubStream


class FixedStream:
    """Stand-in stream that replays a fixed list of uniforms."""

    def __init__(self, values):
        self.values = list(values)

    def next_uniform(self):
        return self.values.pop(0)


def test_weight_at_u_zero_is_scale():
    assert sample_weight(FixedStream([0.0]), ParetoParams(3, 1)) == 1.0
    assert sample_weight(FixedStream([0.0]), ParetoParams(2, 7.5)) == 7.5


def test_weight_median_shape_one():
    # median of the a=1 law is twice the scale
    assert sample_weight(FixedStream([0.5]), ParetoParams(1, 5)) == pytest.approx(10.0, rel=1e-15)


def test_pareto_survival_grid(pareto3):
    n = 10 ** 6
    weights, _ = sample_node_table(n, 202, pareto3, 3)
    assert np.all(weights >= pareto3.w0)
    for k in range(6):
        t = pareto3.w0 * 2 ** k
        p = (pareto3.w0 / t) ** pareto3.a
        frac = np.mean(weights >= t)
        if p == 1.0:
            assert frac == 1.0
            continue
        sigma = np.sqrt(p * (1 - p) / n)
        assert abs(frac - p) <= 3 * sigma, f"t={t}: {frac} vs {p}"


def test_pareto_params_validation():
    with pytest.raises(DomainError):
        ParetoParams(a=0, w0=1)
    with pytest.raises(DomainError):
        ParetoParams(a=3, w0=-1)


def test_direction_unit_norm():
    for d in (2, 3, 4, 7):
        x = sample_direction(SubStream(5, 0), d)
        assert x.shape == (d,)
        assert abs(np.linalg.norm(x) - 1.0) <= 1e-12


def test_direction_rejects_low_dimension():
    with pytest.raises(DimensionError):
        sample_direction(SubStream(0, 0), 1)


def test_direction_symmetry_d3(pareto3):
    n = 10 ** 6
    _, dirs = sample_node_table(n, 303, pareto3, 3)
    sigma = 1.0 / np.sqrt(3 * n)
    for c in range(3):
        assert abs(dirs[:, c].mean()) <= 3 * sigma


def test_direction_cap_fraction_d3(pareto3):
    n = 10 ** 6
    _, dirs = sample_node_table(n, 404, pareto3, 3)
    z = dirs[:, 2]
    for t in (0.0, 0.5):
        expect = (1 - t) / 2
        sigma = np.sqrt(expect * (1 - expect) / n)
        assert abs(np.mean(z >= t) - expect) <= 3 * sigma


def test_direction_symmetry_general_d():
    pareto = ParetoParams(3, 1)
    n = 200000
    _, dirs = sample_node_table(n, 11, pareto, 5)
    assert np.allclose(np.linalg.norm(dirs, axis=1), 1.0, atol=1e-12)
    sigma = 1.0 / np.sqrt(5 * n)
    assert np.all(np.abs(dirs.mean(axis=0)) <= 4 * sigma)


def test_table_matches_scalar_sampler(pareto3):
    for d in (2, 3, 6):
        weights, dirs = sample_node_table(20, 77, pareto3, d)
        for i in range(20):
            node = sample_node(77, i, pareto3, d)
            assert node.weight == weights[i]
            assert np.array_equal(node.direction, dirs[i])
            # the stream-based samplers share the substream but not the
            # vectorized arithmetic; allow an ulp of drift
            stream = SubStream(77, i)
            assert sample_weight(stream, pareto3) == pytest.approx(node.weight, rel=1e-14)
            assert np.allclose(sample_direction(stream, d), node.direction, atol=1e-12)


def test_node_independent_of_population(pareto3):
    w_small, x_small = sample_node_table(10, 5, pareto3, 3)
    w_big, x_big = sample_node_table(1000, 5, pareto3, 3)
    assert np.array_equal(w_small, w_big[:10])
    assert np.array_equal(x_small, x_big[:10])


def test_node_validation(pareto3):
    with pytest.raises(DomainError):
        Node(-1, 1.0, np.array([0.0, 0.0, 1.0]))
    with pytest.raises(DomainError):
        Node(0, 1.0, np.array([0.0, 0.0, 1.5]))
    node = Node(0, 2.0, np.array([0.0, 0.0, 1.0]))
    assert np.array_equal(node.latent, np.array([0.0, 0.0, 2.0]))


def test_edge_boundary_counts(pareto3):
    x = np.array([0.0, 0.0, 1.0])
    u = Node(0, 1.0, x)
    v = Node(1, 1.0, x.copy())
    assert edge_exists(u, v, EdgeRule.undirected(1.0))
    w = Node(2, 1.0, -x)
    assert not edge_exists(u, w, EdgeRule.undirected(0.5))


def test_edge_dimension_mismatch():
    u = Node(0, 1.0, np.array([0.0, 1.0]))
    v = Node(1, 1.0, np.array([0.0, 0.0, 1.0]))
    with pytest.raises(DimensionError):
        edge_exists(u, v, EdgeRule.undirected(0.5))


def test_directed_alpha_beta_one_matches_undirected(pareto3):
    und = EdgeRule.undirected(2.0)
    dir_rule = EdgeRule.directed(2.0, 1.0, 1.0)
    for i in range(10 ** 4):
        u = sample_node(9, 2 * i, pareto3, 3)
        v = sample_node(9, 2 * i + 1, pareto3, 3)
        assert edge_exists(u, v, dir_rule) == edge_exists(u, v, und)
        # symmetric when alpha == beta
        assert edge_exists(v, u, dir_rule) == edge_exists(u, v, dir_rule)


def test_identity_link_matches_directed(pareto3):
    dir_rule = EdgeRule.directed(1.5, 2.0, 0.5)
    link_rule = EdgeRule.link_function(1.5, 2.0, 0.5, LinkFn.identity())
    for i in range(2000):
        u = sample_node(4, 2 * i, pareto3, 3)
        v = sample_node(4, 2 * i + 1, pareto3, 3)
        assert edge_exists(u, v, link_rule) == edge_exists(u, v, dir_rule)


def test_undirected_symmetry(pareto3):
    rule = EdgeRule.undirected(3.0)
    for i in range(2000):
        u = sample_node(8, 2 * i, pareto3, 3)
        v = sample_node(8, 2 * i + 1, pareto3, 3)
        assert edge_exists(u, v, rule) == edge_exists(v, u, rule)


def test_edge_rule_validation():
    with pytest.raises(DomainError):
        EdgeRule.undirected(-1.0)
    with pytest.raises(DomainError):
        EdgeRule.directed(1.0, 0.0, 1.0)
    with pytest.raises(DomainError):
        EdgeRule.directed(1.0, None, 1.0)
    with pytest.raises(DomainError):
        EdgeRule.link_function(1.0, 1.0, 1.0, None)


def test_model_config_validation(pareto3):
    rule = EdgeRule.undirected(1.0)
    with pytest.raises(DomainError):
        ModelConfig(n=0, d=3, pareto=pareto3, rule=rule, seed=0)
    with pytest.raises(DimensionError):
        ModelConfig(n=10, d=1, pareto=pareto3, rule=rule, seed=0)
    with pytest.raises(DomainError):
        ModelConfig(n=10, d=3, pareto=pareto3, rule=rule, seed=2 ** 64)


def test_linkfn_shapes_and_inverse():
    ident = LinkFn.identity()
    assert ident(0.25) == 0.25
    e = LinkFn.exp()
    assert e.lo == pytest.approx(np.exp(-1))
    assert e.hi == pytest.approx(np.e)
    odd = LinkFn.odd_power_plus_c(2, 0.3)
    assert odd(0.5) == pytest.approx(0.5 ** 5 + 0.3)
    for fn in (ident, e, odd):
        for y in np.linspace(fn.lo + 1e-6, fn.hi - 1e-6, 7):
            t = fn.inverse(y)
            assert abs(fn(t) - y) < 1e-10


def test_even_power_not_invertible():
    even = LinkFn.even_power(1)
    assert even(-0.5) == even(0.5) == 0.25
    assert even.max_value == 1.0
    assert not even.strictly_increasing
    with pytest.raises(DomainError):
        even.inverse(0.5)


def test_linkfn_parse_roundtrip():
    for text in ("identity", "exp", "oddpow:2:0.5", "evenpow:3"):
        fn = LinkFn.parse(text)
        assert LinkFn.parse(fn.spec()) == fn
    with pytest.raises(DomainError):
        LinkFn.parse("sigmoid")
    with pytest.raises(DomainError):
        LinkFn.parse("oddpow:2")
