"""
Cut-and-paste competitors, the pendant graph family and its critical length.
"""
from types import SimpleNamespace

import numpy as np
import pytest

from src.discretize import build_mesh, energy, lq_integral, mass, sample
from src.errors import ParameterError
from src.graphs import catalog
from src.ground_states import surgery
from src.ground_states.closed_forms import line_level, soliton, star_stationary_level
from src.ground_states.minimize import SolveOptions, Status
from src.ground_states.surgery import (
    CriticalLengthResult,
    Probe,
    bubble_tower_certificate,
    bubble_tower_soliton,
    critical_length,
    critical_mass,
    cut_soliton,
    gl_competitor,
    gl_ground_state,
    gl_limit_check,
    pendant_competitor,
)


class TestCutSoliton:

    @pytest.mark.parametrize("ell", [0.5, 2.0, 7.0])
    def test_pieces_add_up(self, ell):
        pieces = cut_soliton(1.0, ell)
        assert pieces.head_mass + 2.0 * pieces.tail_mass == pytest.approx(1.0, rel=1e-9)
        assert pieces.reassembled_energy == pytest.approx(line_level(1.0), rel=1e-9)
        assert pieces.cut_value == pytest.approx(soliton(1.0, 0.5 * ell))

    def test_head_domain(self):
        pieces = cut_soliton(1.0, 2.0)
        assert pieces.head(0.0) == pytest.approx(soliton(1.0, 0.0))
        with pytest.raises(ParameterError):
            pieces.head(1.5)

    def test_tail_starts_at_the_cut(self):
        pieces = cut_soliton(2.0, 3.0)
        assert pieces.tail(0.0) == pytest.approx(pieces.cut_value)

    @pytest.mark.parametrize("mu,ell", [(0.0, 1.0), (1.0, 0.0), (1.0, -2.0)])
    def test_positive_arguments(self, mu, ell):
        with pytest.raises(ParameterError):
            cut_soliton(mu, ell)


class TestPendantCompetitor:

    def test_beats_the_soliton(self):
        competitor = pendant_competitor(1.0, 4.0, h_max=0.05, truncation=80.0)
        assert competitor.exact_margin == pytest.approx(-0.75 * competitor.pieces.head_kinetic)
        assert competitor.exact_margin < 0
        assert competitor.mesh_margin < 0
        assert competitor.mesh_margin == pytest.approx(competitor.exact_margin, abs=1e-5)
        assert mass(competitor.function) == pytest.approx(1.0)

    def test_maximum_sits_at_the_tip(self):
        competitor = pendant_competitor(1.0, 2.0, h_max=0.1, truncation=40.0)
        u = competitor.function
        assert u.at_vertex("tip") == pytest.approx(u.max())

    def test_margin_grows_with_the_pendant(self):
        short = pendant_competitor(1.0, 1.0, h_max=0.2, truncation=40.0)
        long = pendant_competitor(1.0, 3.0, h_max=0.2, truncation=40.0)
        assert long.exact_margin < short.exact_margin < 0

    def test_report(self):
        report = pendant_competitor(1.0, 2.0, h_max=0.2, truncation=40.0).to_dict()
        assert report["pendant_length"] == 2.0
        assert report["exact_energy"] == pytest.approx(report["level"] + report["exact_margin"])

    @pytest.mark.parametrize("mu", [0.5, 1.0, 2.0])
    @pytest.mark.parametrize("ell", [0.01, 0.1, 1.0, 10.0])
    def test_margin_is_negative_on_the_lattice(self, mu, ell):
        competitor = pendant_competitor(mu, ell, h_max=0.2 / mu, truncation=40.0 / mu)
        assert competitor.exact_margin < 0
        assert mass(competitor.function) == pytest.approx(mu, rel=1e-8)
        if ell * mu >= 5.0:
            assert competitor.mesh_margin < 0


class TestBubbleTowers:

    def test_wrapped_soliton_keeps_the_line_level(self):
        u = bubble_tower_soliton(1.0, [1.0, 0.5], h_max=0.01, truncation=60.0)
        assert energy(u, 4.0).total == pytest.approx(-1.0 / 96.0, abs=1e-5)
        assert mass(u) == pytest.approx(1.0)

    def test_top_of_the_chain_carries_the_maximum(self):
        u = bubble_tower_soliton(1.0, [2.0, 1.0], h_max=0.05, truncation=40.0)
        assert u.at_vertex("b2") == pytest.approx(u.max())

    def test_unequal_arcs(self):
        with pytest.raises(ParameterError):
            bubble_tower_soliton(1.0, [(1.0, 1.2)])

    def test_certificate_needs_a_tower(self):
        mesh = build_mesh(catalog.star(3), 0.5, 10.0)
        with pytest.raises(ParameterError):
            bubble_tower_certificate(mesh, 1.0)


def _pendant_state(ell, top=1.0, pendant_slope=0.5):
    """A state on the pendant graph with its maximum at the tip and decreasing half-lines"""
    g = catalog.gl_graph(ell)
    mesh = build_mesh(g, 0.05, 20.0)
    pendant = catalog.pendant_edge(g)
    base = top / (1.0 + pendant_slope * ell)

    def values(edge, x):
        if edge == pendant:
            return base * (1.0 + pendant_slope * x)
        return base * np.exp(-0.5 * x)

    return sample(mesh, values)


class TestGlCompetitor:

    def test_mass_and_potential_are_kept(self):
        psi = _pendant_state(1.0)
        competitor = gl_competitor(psi, 1.5)
        assert mass(competitor, "exact") == pytest.approx(mass(psi, "exact"), rel=1e-9)
        assert lq_integral(competitor, 4.0, "exact") == pytest.approx(lq_integral(psi, 4.0, "exact"), rel=1e-9)

    def test_energy_strictly_decreases(self):
        psi = _pendant_state(1.0)
        competitor = gl_competitor(psi, 2.0)
        assert energy(competitor, 4.0, "exact").total < energy(psi, 4.0, "exact").total

    def test_new_graph(self):
        competitor = gl_competitor(_pendant_state(1.0), 1.5)
        g = competitor.mesh.graph
        assert g.edges[catalog.pendant_edge(g)].length == pytest.approx(1.5)
        assert len(g.halflines) == 3
        assert competitor.at_vertex("tip") == pytest.approx(1.0)
        assert competitor.at_vertex("v") < _pendant_state(1.0).at_vertex("v")

    def test_pendant_must_grow(self):
        with pytest.raises(ParameterError):
            gl_competitor(_pendant_state(2.0), 2.0)

    def test_maximum_must_be_at_the_tip(self):
        with pytest.raises(ParameterError):
            gl_competitor(_pendant_state(1.0, pendant_slope=-0.5), 1.5)

    @pytest.mark.slow
    def test_from_a_computed_ground_state(self, coarse):
        psi = gl_ground_state(10.0, 1.0, coarse).best
        competitor = gl_competitor(psi, 12.0)
        assert energy(competitor, 4.0, "exact").total < energy(psi, 4.0, "exact").total


class TestCriticalLength:

    def _fake_probe(self, threshold, calls=None):
        def probe(ell, mu, opts):
            if calls is not None:
                calls.append(opts.reference)
            status = Status.EXISTS if ell * mu > threshold else Status.LIKELY_NONEXISTENT
            return Probe(ell, -1.0 / 96.0, status), False
        return probe

    def test_bisection_brackets_the_threshold(self, monkeypatch):
        calls = []
        monkeypatch.setattr(surgery, "_probe", self._fake_probe(1.3, calls))
        result = critical_length(1.0, width=0.01, ell_low=0.01, ell_high=50.0)
        assert result.complete
        assert result.ell_low <= 1.3 < result.ell_high
        assert result.width <= 0.01
        assert set(calls) == {"discrete"}
        assert result.to_dict()["ell_star"] == pytest.approx(1.3, abs=0.01)

    def test_inconclusive_bracket_end(self, monkeypatch):
        monkeypatch.setattr(surgery, "_probe",
                            lambda ell, mu, opts: (Probe(ell, 0.0, Status.INCONCLUSIVE), True))
        result = critical_length(1.0)
        assert not result.complete
        assert len(result.probes) == 1

    def test_bad_bracket(self):
        with pytest.raises(ParameterError):
            critical_length(1.0, ell_low=2.0, ell_high=1.0)

    def test_critical_mass_by_scaling(self, monkeypatch):
        monkeypatch.setattr(surgery, "critical_length",
                            lambda mu, opts=None, **kwargs: CriticalLengthResult(mu, 2.0, 2.5))
        result = critical_mass(4.0)
        assert result.mass_low == pytest.approx(0.5)
        assert result.mass_high == pytest.approx(0.625)
        assert result.complete

    def test_critical_mass_from_a_bracket_at_another_mass(self, monkeypatch):
        def no_bisection(*args, **kwargs):
            raise AssertionError("the given bracket must be rescaled, not recomputed")

        monkeypatch.setattr(surgery, "critical_length", no_bisection)
        bracket = CriticalLengthResult(2.0, 1.25, 1.5, complete=False)
        result = critical_mass(2.0, length=bracket)
        assert (result.mass_low, result.mass_high) == (1.25, 1.5)
        assert not result.complete

    @pytest.mark.slow
    def test_bisection_on_the_solver(self):
        brackets = {mu: critical_length(mu) for mu in (1.0, 2.0)}
        for mu, result in brackets.items():
            exists = [p.ell for p in result.probes if p.verdict is Status.EXISTS]
            missing = [p.ell for p in result.probes if p.verdict is Status.LIKELY_NONEXISTENT]
            assert result.complete
            assert result.width <= 1e-2 / mu
            assert len(exists) + len(missing) == len(result.probes)
            assert max(missing) < min(exists)
        ratio = brackets[2.0].ell_star / brackets[1.0].ell_star
        assert ratio == pytest.approx(0.5, rel=0.05)


def _fake_classifier(energies, statuses=None):
    def classify(g, mu, opts):
        ell = g.edges[catalog.pendant_edge(g)].length
        status = (statuses or {}).get(ell, Status.EXISTS)
        return SimpleNamespace(best_energy=energies[ell], status=status)
    return classify


class TestLimitCheck:

    def test_decreasing_energies(self, monkeypatch):
        halfline = star_stationary_level(1.0, 1)
        energies = {1.0: -0.012, 5.0: -0.03, 50.0: halfline + 1e-4}
        monkeypatch.setattr(surgery, "classify_existence", _fake_classifier(energies))
        table = gl_limit_check(1.0, [1.0, 5.0, 50.0])
        assert table.monotone and table.strictly_decreasing and table.above_lower_pinch
        assert table.last_gap == pytest.approx(1e-4)
        assert [r.to_row()["verdict"] for r in table.rows] == ["EXISTS"] * 3

    def test_flat_energies_only_matter_between_ground_states(self, monkeypatch):
        energies = {1.0: -1.0 / 96.0, 2.0: -1.0 / 96.0, 3.0: -0.02}
        statuses = {1.0: Status.LIKELY_NONEXISTENT, 2.0: Status.LIKELY_NONEXISTENT}
        monkeypatch.setattr(surgery, "classify_existence", _fake_classifier(energies, statuses))
        table = gl_limit_check(1.0, [1.0, 2.0, 3.0])
        assert table.monotone
        assert table.strictly_decreasing

    def test_increase_is_flagged(self, monkeypatch):
        energies = {1.0: -0.02, 2.0: -0.015}
        monkeypatch.setattr(surgery, "classify_existence", _fake_classifier(energies))
        table = gl_limit_check(1.0, [1.0, 2.0])
        assert not table.monotone
        assert not table.strictly_decreasing

    def test_below_the_halfline_level(self, monkeypatch):
        energies = {1.0: -0.05}
        monkeypatch.setattr(surgery, "classify_existence", _fake_classifier(energies))
        assert not gl_limit_check(1.0, [1.0], slack=1e-3).above_lower_pinch

    @pytest.mark.parametrize("ells", [[], [2.0, 1.0], [1.0, 1.0]])
    def test_lengths_must_increase(self, ells):
        with pytest.raises(ParameterError):
            gl_limit_check(1.0, ells)

    @pytest.mark.slow
    def test_energies_approach_the_halfline_level(self):
        table = gl_limit_check(1.0, [1.0, 2.0, 5.0, 10.0, 50.0])
        assert table.monotone and table.strictly_decreasing and table.above_lower_pinch
        assert table.rows[-1].verdict is Status.EXISTS
        assert table.rows[-1].energy == pytest.approx(-1.0 / 24.0, abs=1e-3)
        existing = [r.energy for r in table.rows if r.verdict is Status.EXISTS]
        assert all(b < a for a, b in zip(existing, existing[1:]))
