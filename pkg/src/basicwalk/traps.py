"""Trap configurations: exact rational probability calculators, shell-method
bounds, and detection of traps already forced by a partial labeling.

A trap is a partial labeling around a vertex that forces any walk arriving
there to cycle without leaving a bounded neighborhood.  Named kinds:

* ``LatticeTrap(d)``  -- on Z^d, the walk bounces between the center and d
  designated neighbors forever (probability (1/2d)^d * prod_{k=d+1}^{2d} 1/k)
* ``HexSpire``        -- out-and-back path trap on the hexagonal lattice
* ``StarTrap``        -- closed-neighborhood trap: every exit from the center
  is immediately returned by the neighbor
* ``StraightPath``    -- n consecutive steps straight out on a d-regular
  graph (probability (1/d)^n)

All calculators use exact rational arithmetic; no floating point here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .graphs import GraphFamily, LatticeZ


class TrapError(Exception):
    pass


@dataclass(frozen=True)
class LatticeTrap:
    dim: int

    def __post_init__(self):
        if self.dim < 2:
            raise TrapError(f"lattice trap needs dimension >= 2, got {self.dim}")


@dataclass(frozen=True)
class HexSpire:
    pass


@dataclass(frozen=True)
class StarTrap:
    center_degree: int
    neighbor_degrees: tuple

    def __post_init__(self):
        if self.center_degree < 1:
            raise TrapError("center degree must be >= 1")
        if any(d < 1 for d in self.neighbor_degrees):
            raise TrapError("neighbor degrees must all be >= 1")


@dataclass(frozen=True)
class StraightPath:
    degree: int
    length: int

    def __post_init__(self):
        if self.degree < 1:
            raise TrapError("degree must be >= 1")
        if self.length < 0:
            raise TrapError("length must be >= 0")


def analytic_trap_probability(kind) -> Fraction:
    """Exact probability that a fresh lazy labeling realizes the given trap
    at the walk's point of entry."""
    if isinstance(kind, LatticeTrap):
        d = kind.dim
        p = Fraction(1, 2 * d) ** d
        for k in range(d + 1, 2 * d + 1):
            p *= Fraction(1, k)
        return p
    if isinstance(kind, HexSpire):
        # (1/3)^3 * (1/2)^3; see also spire_realization_probability for the
        # independent binding-product oracle
        return Fraction(1, 216)
    if isinstance(kind, StarTrap):
        p = Fraction(1, kind.center_degree)
        for dw in kind.neighbor_degrees:
            p *= Fraction(1, dw)
        return p
    if isinstance(kind, StraightPath):
        return Fraction(1, kind.degree) ** kind.length
    raise TrapError(f"malformed trap kind {kind!r}")


@dataclass(frozen=True)
class ShellBounds:
    expected_shells: Fraction
    straight_line_vertex_bound: Fraction
    spiral_max_vertex_bound: Fraction


def shell_bounds(trap_prob: Fraction) -> ShellBounds:
    """Shell-method consequences of a per-shell trap probability p: the
    number of shells crossed before trapping is geometric with mean 1/p;
    a straight-line crossing visits one new vertex per shell (bound
    1/p + 2), and a worst-case spiral within each shell visits at most
    1/p vertices per shell (bound (1/p)^2 + 2)."""
    p = Fraction(trap_prob)
    if not 0 < p < 1:
        raise TrapError(f"trap probability must be in (0, 1), got {p}")
    inv = 1 / p
    return ShellBounds(
        expected_shells=inv,
        straight_line_vertex_bound=inv + 2,
        spiral_max_vertex_bound=inv * inv + 2,
    )


def spire_realization_probability(graph: GraphFamily, path: list,
                                  entry_port: int) -> Fraction:
    """Exact probability that a walk entering (path[0], entry_port) under a
    fresh lazy labeling travels straight out along `path` and returns along
    it back to path[0].  Independent binding-product oracle: walks the
    forced out-and-back trajectory, multiplying 1/(free slots) for every
    fresh binding it requires."""
    if len(path) < 2:
        raise TrapError("spire path needs at least 2 vertices")
    for u, w in zip(path, path[1:]):
        graph.slot_to(u, w)  # raises if not adjacent
    trajectory = list(path) + list(path[-2::-1])
    prob = Fraction(1)
    bound: dict = {}     # (vertex, port) -> slot
    assigned: dict = {}  # vertex -> set of slots
    port = entry_port
    for v, w in zip(trajectory, trajectory[1:]):
        need = graph.slot_to(v, w)
        slot = bound.get((v, port))
        if slot is not None:
            if slot != need:
                return Fraction(0)
        else:
            taken = assigned.setdefault(v, set())
            if need in taken:
                return Fraction(0)
            prob *= Fraction(1, graph.degree(v) - len(taken))
            taken.add(need)
            bound[(v, port)] = need
        port = (port % graph.degree(w)) + 1
    return prob


@dataclass(frozen=True)
class RealizedTrap:
    kind: object
    center: object
    entry_port: int
    tail: int
    period: int
    vertices: frozenset


def detect_realized_trap(graph: GraphFamily, labeling, v, entry_port: int):
    """Return a RealizedTrap iff the labels already bound around v force a
    walk entering (v, entry_port) to cycle without ever leaving v's closed
    neighborhood.  Any dependence on an unbound label, or any forced exit
    from the closed neighborhood, yields None (the detector only certifies
    fully forced traps)."""
    closed = {v} | set(graph.neighbors(v))
    limit = 2 * sum(graph.degree(u) for u in closed) + 2
    pos, port = v, entry_port
    seen: dict = {}
    history = []
    for step_index in range(limit):
        state = (pos, port)
        first = seen.get(state)
        if first is not None:
            tail, period = first, step_index - first
            cycle = history[first:]
            return RealizedTrap(
                kind=_classify(graph, v, cycle),
                center=v, entry_port=entry_port,
                tail=tail, period=period,
                vertices=frozenset(p for p, _ in history))
        seen[state] = step_index
        history.append(state)
        slot = labeling.bound_slot(pos, port)
        if slot is None:
            return None
        w = graph.neighbor(pos, slot)
        if w not in closed:
            return None
        pos, port = w, (port % graph.degree(w)) + 1
    return None


def _classify(graph, center, cycle):
    positions = [p for p, _ in cycle]
    offsets = [i for i, p in enumerate(positions) if p == center]
    bouncing = (len(offsets) * 2 == len(positions)
                and all(positions[(i + 1) % len(positions)] != center
                        for i in offsets))
    if bouncing and isinstance(graph, LatticeZ):
        return LatticeTrap(graph.dim)
    if bouncing:
        others = sorted({p for p in positions if p != center},
                        key=lambda p: graph.slot_to(center, p))
        return StarTrap(graph.degree(center),
                        tuple(graph.degree(w) for w in others))
    return ("closed-neighborhood", center)
