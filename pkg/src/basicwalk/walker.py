"""Walk execution: the basic-walk automaton, a simple-random-walk
baseline, and the rotor walk.

The basic walk is the automaton on states (vertex, next_port): from (v, i)
it exits v by the arc whose port label is i, arriving at w, and the next
state is (w, (i mod deg(w)) + 1).  The walk cycles exactly when a state
repeats, so cycle detection keys on states via a first-occurrence map.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

from .graphs import GraphFamily
from .labelings import PortLabeling
from .rng import RandomStream


class WalkError(Exception):
    pass


@dataclass(frozen=True)
class WalkState:
    position: object
    next_port: int


@dataclass(frozen=True)
class WalkOutcome:
    """Classified result of one basic-walk run.

    `cycled` runs carry the tail (steps before the first repeated state)
    and period (length of the repeating state cycle); budget-exhausted
    runs have tail = period = None.  `unique_states` counts distinct
    (vertex, port) states stepped from, which equals the number of
    distinct directed labeled arcs traversed.  Distances are measured
    from the start vertex; `monotone_escape` is true when every step
    strictly increased that distance.
    """

    cycled: bool
    tail: int | None
    period: int | None
    steps_taken: int
    unique_vertices: int
    unique_states: int
    max_distance: int
    monotone_escape: bool
    visited: tuple | None = None

    @property
    def classification(self) -> str:
        return "cycled" if self.cycled else "budget-exhausted"


def step(graph: GraphFamily, labeling, state: WalkState,
         stream: RandomStream | None):
    """One automaton transition.  Returns (new_state, slot, new_label)
    where new_label reports whether this step bound a fresh label."""
    before = labeling.bindings_made
    slot = labeling.exit_slot(state.position, state.next_port, stream)
    w = graph.neighbor(state.position, slot)
    next_port = (state.next_port % graph.degree(w)) + 1
    return WalkState(w, next_port), slot, labeling.bindings_made > before


def run_basic_walk(graph: GraphFamily, labeling, start=None, init_port: int = 1,
                   budget: int = 10**6, stream: RandomStream | None = None,
                   trace_path=None, collect_visited: bool = False) -> WalkOutcome:
    """Run the basic walk from (start, init_port) until a state repeats or
    the step budget is exhausted."""
    if budget < 1:
        raise WalkError(f"budget must be >= 1, got {budget}")
    if start is None:
        start = graph.origin()
    if not 1 <= init_port <= graph.degree(start):
        raise WalkError(
            f"init port {init_port} out of 1..{graph.degree(start)}")

    seen: dict = {}              # state -> step index of first occurrence
    state = WalkState(start, init_port)
    vertices = {start}
    visited = [start] if collect_visited else None
    max_distance = 0
    monotone = True
    distance = graph.distance_from
    prev_distance = 0
    cycled = False
    tail = period = None
    steps = 0

    trace_file = trace_writer = None
    if trace_path is not None:
        trace_file = open(trace_path, "w", newline="")
        trace_writer = csv.writer(trace_file)
        trace_writer.writerow(
            ["step", "vertex", "port", "slot", "distance", "new_label"])

    try:
        while True:
            key = (state.position, state.next_port)
            first = seen.get(key)
            if first is not None:
                cycled = True
                tail = first
                period = steps - first
                break
            if steps >= budget:
                break
            seen[key] = steps
            v, port = state.position, state.next_port
            state, slot, new_label = step(graph, labeling, state, stream)
            steps += 1
            d = distance(start, state.position)
            if d <= prev_distance:
                monotone = False
            prev_distance = d
            if d > max_distance:
                max_distance = d
            vertices.add(state.position)
            if visited is not None:
                visited.append(state.position)
            if trace_writer is not None:
                trace_writer.writerow(
                    [steps, _fmt_vertex(v), port, slot, d, int(new_label)])
    finally:
        if trace_file is not None:
            trace_file.close()

    return WalkOutcome(
        cycled=cycled, tail=tail, period=period, steps_taken=steps,
        unique_vertices=len(vertices), unique_states=len(seen),
        max_distance=max_distance, monotone_escape=monotone,
        visited=tuple(visited) if visited is not None else None)


def _fmt_vertex(v) -> str:
    if isinstance(v, tuple):
        return "(" + " ".join(str(c) for c in v) + ")"
    return str(v)


@dataclass(frozen=True)
class SimpleWalkStats:
    steps: int
    unique_vertices: int
    max_distance: int


def run_simple_random_walk(graph: GraphFamily, start=None, budget: int = 1000,
                           stream: RandomStream | None = None,
                           collect_visited: bool = False):
    """Uniform-neighbor random walk, kept as a baseline for comparison."""
    if budget < 1:
        raise WalkError(f"budget must be >= 1, got {budget}")
    if stream is None:
        raise WalkError("simple random walk needs a random stream")
    if start is None:
        start = graph.origin()
    v = start
    vertices = {v}
    visited = [v] if collect_visited else None
    max_distance = 0
    for _ in range(budget):
        slot = stream.below(graph.degree(v)) + 1
        v = graph.neighbor(v, slot)
        vertices.add(v)
        if visited is not None:
            visited.append(v)
        d = graph.distance_from(start, v)
        if d > max_distance:
            max_distance = d
    stats = SimpleWalkStats(budget, len(vertices), max_distance)
    if collect_visited:
        return stats, tuple(visited)
    return stats


@dataclass(frozen=True)
class RotorOutcome:
    steps: int
    unique_vertices: int
    periodic: bool
    tail: int | None
    period: int | None
    trajectory: tuple | None = None


def run_rotor_walk(graph: GraphFamily, rotor_mode="canonical", start=None,
                   budget: int = 1000, stream: RandomStream | None = None,
                   state_cap: int = 64, collect_trajectory: bool = False) -> RotorOutcome:
    """Rotor walk: each vertex holds a cyclic ordering of its exit slots
    and a pointer; the particle exits by the pointed arc, then the pointer
    advances.

    `rotor_mode` is 'canonical' (identity orderings), 'random' (a uniform
    permutation drawn per vertex on first visit, requires a stream), or a
    dict vertex -> explicit slot ordering.  Full-state periodicity (the
    pair of particle position and all rotor pointers) is only tracked
    while at most `state_cap` vertices have been visited, since the full
    rotor state grows with coverage.
    """
    if budget < 1:
        raise WalkError(f"budget must be >= 1, got {budget}")
    if rotor_mode == "random" and stream is None:
        raise WalkError("random rotor orderings need a stream")
    if start is None:
        start = graph.origin()

    orderings: dict = {}   # vertex -> tuple of slots in cyclic order
    pointers: dict = {}    # vertex -> index into its ordering

    def ordering_at(v):
        order = orderings.get(v)
        if order is None:
            if isinstance(rotor_mode, dict):
                order = tuple(rotor_mode[v])
            elif rotor_mode == "random":
                slots = list(range(1, graph.degree(v) + 1))
                stream.shuffle(slots)
                order = tuple(slots)
            elif rotor_mode == "canonical":
                order = tuple(range(1, graph.degree(v) + 1))
            else:
                raise WalkError(f"unknown rotor mode {rotor_mode!r}")
            if sorted(order) != list(range(1, graph.degree(v) + 1)):
                raise WalkError(f"ordering at {v!r} is not a slot permutation")
            orderings[v] = order
            pointers[v] = 0
        return order

    v = start
    vertices = {v}
    trajectory = [v] if collect_trajectory else None
    seen_full: dict = {}
    tracking = True
    periodic = False
    tail = period = None
    steps = 0
    while steps < budget:
        if tracking and len(vertices) <= state_cap:
            full = (v, tuple(sorted(pointers.items())))
            first = seen_full.get(full)
            if first is not None:
                periodic = True
                tail = first
                period = steps - first
                break
            seen_full[full] = steps
        elif tracking:
            tracking = False
            seen_full.clear()
        order = ordering_at(v)
        idx = pointers[v]
        slot = order[idx]
        pointers[v] = (idx + 1) % len(order)
        v = graph.neighbor(v, slot)
        vertices.add(v)
        if trajectory is not None:
            trajectory.append(v)
        steps += 1
    return RotorOutcome(
        steps=steps, unique_vertices=len(vertices), periodic=periodic,
        tail=tail, period=period,
        trajectory=tuple(trajectory) if trajectory is not None else None)
