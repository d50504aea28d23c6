from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from basicwalk.graphs import HexLattice, LatticeZ, Star
from basicwalk.labelings import PortLabeling
from basicwalk.rng import RandomStream, substream
from basicwalk.traps import (HexSpire, LatticeTrap, StarTrap, StraightPath,
                             TrapError, analytic_trap_probability,
                             detect_realized_trap, shell_bounds,
                             spire_realization_probability)
from basicwalk.walker import WalkState, step


class TestAnalyticProbability:
    def test_lattice_d2(self):
        assert analytic_trap_probability(LatticeTrap(2)) == Fraction(1, 192)

    def test_lattice_d2_two_formulas_one_value(self):
        # the bounce-trap product (1/4)^3 * (1/3) must equal the general
        # dimension formula at d=2
        direct = Fraction(1, 4) ** 3 * Fraction(1, 3)
        assert analytic_trap_probability(LatticeTrap(2)) == direct

    def test_lattice_d3(self):
        assert analytic_trap_probability(LatticeTrap(3)) == Fraction(1, 25920)

    def test_lattice_general_formula(self):
        for d in range(2, 11):
            expect = Fraction(1, 2 * d) ** d
            for k in range(d + 1, 2 * d + 1):
                expect /= k
            assert analytic_trap_probability(LatticeTrap(d)) == expect

    def test_hex_spire(self):
        assert analytic_trap_probability(HexSpire()) == Fraction(1, 216)

    def test_star_cv(self):
        p = analytic_trap_probability(StarTrap(4, (3, 3, 5)))
        assert p == Fraction(1, 4 * 3 * 3 * 5)

    def test_star_cv_regular_lower_bound(self):
        # all neighbors degree D: probability (1/D)^(D+1)
        for D in (3, 4, 5):
            p = analytic_trap_probability(StarTrap(D, (D,) * D))
            assert p == Fraction(1, D) ** (D + 1)

    def test_straight_path(self):
        assert analytic_trap_probability(StraightPath(4, 3)) == Fraction(1, 64)
        assert analytic_trap_probability(StraightPath(4, 0)) == 1
        assert analytic_trap_probability(StraightPath(3, 2)) == Fraction(1, 9)

    def test_malformed_kinds(self):
        with pytest.raises(TrapError):
            LatticeTrap(1)
        with pytest.raises(TrapError):
            StarTrap(0, ())
        with pytest.raises(TrapError):
            StarTrap(3, (2, 0))
        with pytest.raises(TrapError):
            StraightPath(4, -1)
        with pytest.raises(TrapError):
            analytic_trap_probability("bogus")

    def test_all_outputs_exact_rationals(self):
        kinds = [LatticeTrap(2), HexSpire(), StarTrap(3, (2, 2)),
                 StraightPath(5, 4)]
        for kind in kinds:
            assert isinstance(analytic_trap_probability(kind), Fraction)


class TestShellBounds:
    def test_reference_values(self):
        b = shell_bounds(Fraction(1, 192))
        assert b.expected_shells == 192
        assert b.straight_line_vertex_bound == 194
        assert b.spiral_max_vertex_bound == 36866

    def test_half(self):
        b = shell_bounds(Fraction(1, 2))
        assert (b.expected_shells, b.straight_line_vertex_bound,
                b.spiral_max_vertex_bound) == (2, 4, 6)

    def test_hex_value(self):
        assert shell_bounds(Fraction(1, 216)).expected_shells == 216

    def test_out_of_range(self):
        for p in (Fraction(0), Fraction(1), Fraction(3, 2), Fraction(-1, 4)):
            with pytest.raises(TrapError):
                shell_bounds(p)

    @given(st.integers(2, 10**6), st.integers(2, 10**6))
    def test_expected_shells_strictly_decreasing(self, a, b):
        pa, pb = Fraction(1, a), Fraction(1, b)
        if pa < pb:
            assert (shell_bounds(pa).expected_shells
                    > shell_bounds(pb).expected_shells)


class TestSpireOracle:
    def test_hex_out_and_back_length_3(self):
        # binding-product oracle over the drawn configuration; this value
        # intentionally differs from the pinned calculator constant 1/216
        # (four degree-3 bindings and two forced two-way choices)
        g = HexLattice()
        p = spire_realization_probability(g, [(0, 0), (1, 0), (2, 0), (3, 0)],
                                          entry_port=1)
        assert p == Fraction(1, 324)

    def test_lattice_out_and_back_length_1(self):
        g = LatticeZ(2)
        # one binding at the center (1/4) and one return binding (1/4)
        p = spire_realization_probability(g, [(0, 0), (1, 0)], 1)
        assert p == Fraction(1, 16)

    def test_matches_monte_carlo(self):
        import math
        g = HexLattice()
        path = [(0, 0), (1, 0), (2, 0), (3, 0)]
        expect = float(spire_realization_probability(g, path, 1))
        trajectory = path + path[-2::-1]
        n = 2 * 10**5
        hits = 0
        for t in range(n):
            s = substream(140, t)
            lab = PortLabeling(g)
            state = WalkState((0, 0), 1)
            ok = True
            for target in trajectory[1:]:
                state, _, _ = step(g, lab, state, s)
                if state.position != target:
                    ok = False
                    break
            hits += ok
        sigma = math.sqrt(expect * (1 - expect) / n)
        assert abs(hits / n - expect) <= 3 * sigma

    def test_non_path_rejected(self):
        with pytest.raises(Exception):
            spire_realization_probability(LatticeZ(2), [(0, 0), (2, 0)], 1)
        with pytest.raises(TrapError):
            spire_realization_probability(LatticeZ(2), [(0, 0)], 1)


def force_bounce_trap(graph, center, entry_port, neighbors):
    """Bind the labels that trap a walk entering (center, entry_port) into
    out-and-back excursions over `neighbors` in order."""
    lab = PortLabeling(graph)
    port = entry_port
    for w in neighbors:
        lab.bind(center, port, graph.slot_to(center, w))
        wport = (port % graph.degree(w)) + 1
        lab.bind(w, wport, graph.slot_to(w, center))
        port = (wport % graph.degree(center)) + 1
    return lab


class TestDetectRealizedTrap:
    def test_fresh_neighborhood_none(self):
        g = LatticeZ(2)
        assert detect_realized_trap(g, PortLabeling(g), (0, 0), 1) is None

    def test_lattice_bounce_trap_detected(self):
        g = LatticeZ(2)
        lab = force_bounce_trap(g, (0, 0), 1, [(1, 0), (-1, 0)])
        trap = detect_realized_trap(g, lab, (0, 0), 1)
        assert trap is not None
        assert trap.kind == LatticeTrap(2)
        assert trap.period == 4
        assert trap.vertices <= {(0, 0), (1, 0), (-1, 0)}

    def test_star_hub_trap_detected(self):
        g = Star(8)
        lab = PortLabeling(g)
        # every hub exit is returned immediately by its leaf
        for port in range(1, 9):
            lab.bind(0, port, port)
            lab.bind(port, 1, 1)
        trap = detect_realized_trap(g, lab, 0, 1)
        assert trap is not None
        assert isinstance(trap.kind, StarTrap)
        assert trap.kind.center_degree == 8

    def test_unbound_dependency_returns_none(self):
        g = LatticeZ(2)
        lab = PortLabeling(g)
        lab.bind((0, 0), 1, 1)  # exit bound, return at neighbor unbound
        assert detect_realized_trap(g, lab, (0, 0), 1) is None

    def test_forced_exit_returns_none(self):
        g = LatticeZ(2)
        lab = PortLabeling(g)
        lab.bind((0, 0), 1, 1)
        lab.bind((1, 0), 2, 1)  # sends the walk onward to (2, 0)
        assert detect_realized_trap(g, lab, (0, 0), 1) is None

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10**6))
    def test_soundness_under_random_completion(self, seed):
        # a certified trap stays inside the closed neighborhood under any
        # completion of the unbound labels
        g = LatticeZ(2)
        lab = force_bounce_trap(g, (0, 0), 1, [(1, 0), (-1, 0)])
        trap = detect_realized_trap(g, lab, (0, 0), 1)
        assert trap is not None
        closed = {(0, 0)} | set(g.neighbors((0, 0)))
        s = substream(seed, 0)
        state = WalkState((0, 0), 1)
        for _ in range(10 * g.degree((0, 0))):
            state, _, _ = step(g, lab, state, s)
            assert state.position in closed
