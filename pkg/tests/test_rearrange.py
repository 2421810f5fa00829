"""
Distribution functions, monotone and symmetric rearrangements, preimage
counts, checked on a corpus of random piecewise-linear functions.
"""
from dataclasses import replace

import numpy as np
import pytest

from src.discretize import GraphFunction, build_mesh, energy, grad_norm_squared, lq_integral, mass, sample
from src.errors import ParameterError
from src.graphs import GraphBuilder, catalog, parse_graph
from src.ground_states.closed_forms import line_level, star_stationary_state
from src.ground_states.minimize import minimize
from src.ground_states.rearrange import (
    ProfileKind,
    distribution,
    min_preimage_count,
    monotone_rearrangement,
    preimage_count,
    preimage_counts,
    symmetric_from_monotone,
    symmetric_rearrangement,
)

LOOP = "vertex a\nedge a a 4.0\n"
TRIANGLE_WITH_PENDANT = "vertex a\nvertex b\nvertex c\nvertex d\nedge a b 1.0\nedge b c 1.5\nedge c a 0.7\nedge c d 2.0\n"
CORPUS_GRAPHS = (LOOP, TRIANGLE_WITH_PENDANT, "vertex a\nvertex b\nedge a b 3.0\nedge a b 1.0\n")


def _random_corpus(count=100, seed=11):
    rng = np.random.default_rng(seed)
    corpus = []
    for k in range(count):
        g = parse_graph(CORPUS_GRAPHS[k % len(CORPUS_GRAPHS)])
        mesh = build_mesh(g, rng.uniform(0.15, 0.6), 1.0)
        values = rng.uniform(0.0, 1.0, mesh.n_nodes)
        if k % 5 == 0:
            values[rng.integers(0, mesh.n_nodes, 3)] = 0.5   # plateaus and repeated values
        corpus.append(GraphFunction(mesh, values))
    return corpus


CORPUS = _random_corpus()


def _segment_function(values, length):
    b = GraphBuilder()
    b.add_vertex("a")
    b.add_vertex("b")
    b.add_edge("a", "b", length)
    mesh = build_mesh(b.build(), length / (len(values) - 1), 1.0)
    nodes = np.concatenate([[values[0], values[-1]], values[1:-1]])
    return GraphFunction(mesh, nodes)


class TestDistribution:

    def test_linear_ramp(self):
        u = _segment_function(np.array([0.0, 1.0, 2.0]), 2.0)
        rho = distribution(u)
        assert rho(0.5) == pytest.approx(1.5)
        assert rho(-1.0) == pytest.approx(2.0)
        assert rho(2.0) == 0.0

    def test_plateau_jump(self):
        u = _segment_function(np.array([1.0, 1.0, 0.0]), 2.0)
        rho = distribution(u)
        assert rho(1.0) == 0.0
        assert rho(0.999999) == pytest.approx(1.0, abs=1e-5)

    def test_negative_values_rejected(self):
        with pytest.raises(ParameterError):
            distribution(_segment_function(np.array([1.0, -0.1]), 1.0))


class TestMonotone:

    def test_decreasing_profile_is_its_own_rearrangement(self):
        u = _segment_function(np.array([3.0, 2.0, 0.5, 0.0]), 3.0)
        star = monotone_rearrangement(u)
        assert star.kind is ProfileKind.MONOTONE
        assert np.allclose(star(np.array([0.0, 1.0, 2.0, 3.0])), [3.0, 2.0, 0.5, 0.0])

    def test_increasing_profile_is_reversed(self):
        u = _segment_function(np.array([0.0, 1.0, 4.0]), 2.0)
        star = monotone_rearrangement(u)
        assert np.allclose(star(np.array([0.0, 1.0, 2.0])), [4.0, 1.0, 0.0])

    @pytest.mark.parametrize("q", [2.0, 3.0, 4.0, 5.0])
    def test_equimeasurable_on_corpus(self, q):
        for u in CORPUS:
            reference = lq_integral(u, q, "exact")
            star = monotone_rearrangement(u)
            hat = symmetric_from_monotone(star)
            assert lq_integral(star.as_graph_function, q, "exact") == pytest.approx(reference, rel=1e-8)
            assert lq_integral(hat.as_graph_function, q, "exact") == pytest.approx(reference, rel=1e-8)

    def test_polya_szego_on_corpus(self):
        for u in CORPUS:
            star = monotone_rearrangement(u)
            assert star.grad_norm_squared() <= grad_norm_squared(u) * (1.0 + 1e-10)
            assert np.all(np.diff(star.values) <= 0.0)
            assert star.length == pytest.approx(u.mesh.total_length())

    def test_top_and_bottom_values(self):
        for u in CORPUS[:10]:
            star = monotone_rearrangement(u)
            assert star.values[0] == pytest.approx(u.values.max())
            assert star.values[-1] == pytest.approx(u.values.min())


class TestSymmetric:

    def test_relation_to_monotone(self):
        for u in CORPUS[:20]:
            star = monotone_rearrangement(u)
            hat = symmetric_rearrangement(u)
            x = np.linspace(-hat.length / 2.0, hat.length / 2.0, 41)
            assert np.allclose(hat(x), star(2.0 * np.abs(x)), atol=1e-14)
            assert hat(0.0) == pytest.approx(u.values.max())

    def test_requires_monotone_profile(self):
        hat = symmetric_rearrangement(CORPUS[0])
        with pytest.raises(ParameterError):
            symmetric_from_monotone(hat)

    def test_kinetic_energy_drops_when_every_level_is_hit_twice(self):
        doubled = [u for u in CORPUS if min_preimage_count(u) >= 2]
        assert doubled   # every function on the loop qualifies
        for u in doubled:
            hat = symmetric_rearrangement(u)
            assert hat.grad_norm_squared() <= grad_norm_squared(u) * (1.0 + 1e-10)

    def test_profile_rows(self):
        rows = monotone_rearrangement(CORPUS[2]).rows()
        assert rows[0]["edge_id"] == "rplus"
        assert rows[0]["arclength"] == 0.0


class TestPreimages:

    def test_loop_hits_every_level_an_even_number_of_times(self):
        g = parse_graph(LOOP)
        mesh = build_mesh(g, 0.5, 1.0)
        u = sample(mesh, lambda _edge, x: 2.0 + np.cos(2.0 * np.pi * x / 4.0 + 0.3))
        _, counts = preimage_counts(u)
        assert np.all(counts % 2 == 0)
        assert min_preimage_count(u) == 2

    def test_monotone_segment_counts_once(self):
        u = _segment_function(np.array([0.0, 1.0, 2.0, 3.0]), 3.0)
        assert preimage_count(u, 1.5) == 1
        assert min_preimage_count(u) == 1

    def test_levels_must_be_regular(self):
        u = _segment_function(np.array([0.0, 1.0, 2.0]), 2.0)
        with pytest.raises(ParameterError):
            preimage_count(u, 1.0)
        with pytest.raises(ParameterError):
            preimage_count(u, 2.5)

    def test_half_soliton_on_a_truncated_halfline(self):
        mesh = build_mesh(catalog.halfline(), 0.1, 20.0)
        u = sample(mesh, lambda _edge, x: np.exp(-x))
        assert min_preimage_count(u) == 1


def _at_exact_mass(u, mu=1.0):
    return u.with_values(u.values * np.sqrt(mu / mass(u, "exact")))


def _random_star_functions(count=10, seed=23):
    rng = np.random.default_rng(seed)
    mesh = build_mesh(catalog.star(3), 0.1, 20.0)
    functions = []
    for _ in range(count):
        rates = rng.uniform(0.2, 1.5, 3)
        wiggles = rng.uniform(0.5, 3.0, 3)
        u = sample(mesh, lambda edge, x: np.exp(-rates[edge] * x) * (1.0 + 0.3 * np.sin(wiggles[edge] * x)))
        functions.append(_at_exact_mass(u))
    return functions


class TestStar:

    def test_star_state_hits_every_level_three_times(self):
        u = star_stationary_state(build_mesh(catalog.star(3), 0.1, 30.0), 1.0)
        mids, counts = preimage_counts(u)
        assert np.all(counts == 3)
        assert preimage_count(u, float(mids[len(mids) // 2])) == 3
        assert min_preimage_count(u) == 3

    def test_rearranging_the_star_state_lowers_the_energy(self):
        u = _at_exact_mass(star_stationary_state(build_mesh(catalog.star(3), 0.05, 60.0), 1.0))
        hat = symmetric_rearrangement(u)
        star_energy = energy(u, 4.0, "exact").total
        assert line_level(1.0) < hat.energy(4.0).total < star_energy

    def test_energy_chain_on_random_star_functions(self):
        for u in _random_star_functions():
            assert min_preimage_count(u) >= 2
            hat = symmetric_rearrangement(u)
            rearranged = hat.energy(4.0).total
            assert rearranged <= energy(u, 4.0, "exact").total + 1e-12
            assert rearranged > line_level(1.0)

    def test_energy_chain_on_a_computed_star_state(self, coarse):
        result = minimize(catalog.star(3), 1.0, replace(coarse, starts=("vertex:v", "edge:0")))
        u = _at_exact_mass(result.best.with_values(np.abs(result.best.values)))
        hat = symmetric_rearrangement(u)
        rearranged = hat.energy(4.0).total
        assert rearranged <= energy(u, 4.0, "exact").total + 1e-12
        assert rearranged > line_level(1.0)
