"""Port labelings: lazy uniform, full uniform, and deterministic schemes.

A labeling is a per-vertex partial bijection between port numbers and
neighbor slots.  The lazy mode binds one label per walk step, drawing the
slot uniformly from the still-unassigned slots of the vertex (rejection
sampling against the assigned set, so vertices of degree 2^40 never
materialize their slot lists).  The full mode assigns an independent
uniform permutation at every vertex of a finite graph up front; the two
modes induce identical walk distributions.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graphs import GraphFamily, LatticeZ
from .rng import RandomStream


class LabelingError(Exception):
    pass


class PortOutOfRangeError(LabelingError):
    pass


class InfiniteFamilyError(LabelingError):
    pass


class SchemeMismatchError(LabelingError):
    pass


class FixtureFormatError(LabelingError):
    pass


class PortLabeling:
    """Sparse partial bijection port <-> slot, one instance per trial."""

    is_deterministic = False

    def __init__(self, graph: GraphFamily):
        self.graph = graph
        self._slot_of: dict = {}    # (vertex, port) -> slot
        self._assigned: dict = {}   # vertex -> set of assigned slots
        self.bindings_made = 0

    def bound_slot(self, v, port: int):
        """The slot bound to (v, port), or None if unbound."""
        return self._slot_of.get((v, port))

    def bind(self, v, port: int, slot: int) -> None:
        degree = self.graph.degree(v)
        if not 1 <= port <= degree:
            raise PortOutOfRangeError(f"port {port} out of 1..{degree} at {v!r}")
        if not 1 <= slot <= degree:
            raise LabelingError(f"slot {slot} out of 1..{degree} at {v!r}")
        if (v, port) in self._slot_of:
            raise LabelingError(f"port {port} already bound at {v!r}")
        assigned = self._assigned.setdefault(v, set())
        if slot in assigned:
            raise LabelingError(f"slot {slot} already assigned at {v!r}")
        assigned.add(slot)
        self._slot_of[(v, port)] = slot
        self.bindings_made += 1

    def exit_slot(self, v, port: int, stream: RandomStream | None) -> int:
        """Resolve (v, port): return the bound slot, or bind a uniformly
        random free slot.  A bound port consumes no randomness."""
        slot = self._slot_of.get((v, port))
        if slot is not None:
            return slot
        degree = self.graph.degree(v)
        if not 1 <= port <= degree:
            raise PortOutOfRangeError(f"port {port} out of 1..{degree} at {v!r}")
        if stream is None:
            raise LabelingError(f"(v={v!r}, port={port}) unbound and no stream")
        assigned = self._assigned.get(v)
        if assigned is None:
            assigned = set()
            self._assigned[v] = assigned
        elif len(assigned) >= degree:
            raise LabelingError(f"no free slot at {v!r} (internal corruption)")
        below = stream.below
        while True:
            slot = below(degree) + 1
            if slot not in assigned:
                break
        assigned.add(slot)
        self._slot_of[(v, port)] = slot
        self.bindings_made += 1
        return slot

    def items(self):
        return self._slot_of.items()


def resolve_exit_slot(labeling, graph, v, port, stream=None) -> int:
    """Functional form of the exit-slot resolution; `graph` must match the
    labeling's graph."""
    if labeling.graph is not graph and labeling.graph != graph:
        raise LabelingError("labeling belongs to a different graph")
    return labeling.exit_slot(v, port, stream)


def full_uniform_labeling(graph: GraphFamily,
                          stream: RandomStream) -> PortLabeling:
    """Assign an independent uniform port permutation at every vertex of a
    finite graph."""
    if not graph.is_finite:
        raise InfiniteFamilyError(
            f"cannot fully label infinite family {graph.name}")
    labeling = PortLabeling(graph)
    for v in graph.vertices():
        degree = graph.degree(v)
        ports = list(range(1, degree + 1))
        stream.shuffle(ports)
        for slot, port in enumerate(ports, start=1):
            labeling.bind(v, port, slot)
    return labeling


class DeterministicScheme:
    """Total port->slot assignment computed on demand."""

    name = "scheme"

    def check_graph(self, graph: GraphFamily) -> None:
        pass

    def slot_for(self, graph: GraphFamily, v, port: int) -> int:
        raise NotImplementedError


class AlternatingLine(DeterministicScheme):
    """Edge labels alternate 1,2,1,2 along Z (both arcs of an edge share
    the label), so every basic walk moves in a straight line forever."""

    name = "alternating"

    def check_graph(self, graph):
        if not (isinstance(graph, LatticeZ) and graph.dim == 1):
            raise SchemeMismatchError("alternating scheme requires Z^1")

    def slot_for(self, graph, v, port):
        x = v[0]
        # edge (x, x+1) is labeled 1 when x is even, 2 when x is odd
        right = 1 if x % 2 == 0 else 2
        if port == right:
            return 1
        if port == 3 - right:
            return 2
        raise PortOutOfRangeError(f"port {port} out of 1..2")


class StaircasePlane(DeterministicScheme):
    """Shared edge labels on Z^2: vertical edges alternate 1/3 by row
    parity, horizontal edges alternate 4/2 by column parity.  Every basic
    walk from any start and any initial port climbs an infinite staircase,
    gaining one unit of L-infinity distance every two steps."""

    name = "staircase"

    def check_graph(self, graph):
        if not (isinstance(graph, LatticeZ) and graph.dim == 2):
            raise SchemeMismatchError("staircase scheme requires Z^2")

    @staticmethod
    def _vertical(y):
        return 1 if y % 2 == 0 else 3

    @staticmethod
    def _horizontal(x):
        return 4 if x % 2 == 0 else 2

    def slot_for(self, graph, v, port):
        x, y = v
        by_slot = {
            1: self._horizontal(x),       # +x
            2: self._horizontal(x - 1),   # -x
            3: self._vertical(y),         # +y
            4: self._vertical(y - 1),     # -y
        }
        for slot, label in by_slot.items():
            if label == port:
                return slot
        raise PortOutOfRangeError(f"port {port} out of 1..4")


_SPIRAL_SLOT = {(1, 0): 1, (-1, 0): 2, (0, 1): 3, (0, -1): 4}
# counterclockwise square spiral: E, N, W, W, S, S, E, E, E, ...
_SPIRAL_DIRS = ((1, 0), (0, 1), (-1, 0), (0, -1))


class SpiralPlane(DeterministicScheme):
    """Square-spiral labeling of Z^2 (stretch factor 1): the basic walk
    from the origin with initial port 1 follows the spiral and covers the
    radius-r ball within (2r+1)^2 - 1 steps.  Ports not on the spiral are
    completed canonically (remaining ports to remaining slots, ascending)."""

    name = "spiral"

    def __init__(self):
        self._path = [(0, 0)]
        self._index = {(0, 0): 0}
        self._dir = 0
        self._run = 1
        self._second_leg = False
        self._pos = (0, 0)

    def check_graph(self, graph):
        if not (isinstance(graph, LatticeZ) and graph.dim == 2):
            raise SchemeMismatchError("spiral scheme requires Z^2")

    def _extend(self):
        dx, dy = _SPIRAL_DIRS[self._dir]
        x, y = self._pos
        for _ in range(self._run):
            x, y = x + dx, y + dy
            self._index[(x, y)] = len(self._path)
            self._path.append((x, y))
        self._pos = (x, y)
        self._dir = (self._dir + 1) % 4
        if self._second_leg:
            self._run += 1
        self._second_leg = not self._second_leg

    def _index_of(self, v):
        radius = max(abs(v[0]), abs(v[1]))
        while v not in self._index:
            if max(abs(self._pos[0]), abs(self._pos[1])) > radius + 1:
                raise SchemeMismatchError(f"vertex {v!r} not on spiral")
            self._extend()
        return self._index[v]

    def slot_for(self, graph, v, port):
        if not 1 <= port <= 4:
            raise PortOutOfRangeError(f"port {port} out of 1..4")
        t = self._index_of(v)
        while len(self._path) <= t + 1:
            self._extend()
        succ = self._path[t + 1]
        walk_port = (t % 4) + 1
        walk_slot = _SPIRAL_SLOT[(succ[0] - v[0], succ[1] - v[1])]
        if port == walk_port:
            return walk_slot
        rest_ports = [p for p in (1, 2, 3, 4) if p != walk_port]
        rest_slots = [s for s in (1, 2, 3, 4) if s != walk_slot]
        return rest_slots[rest_ports.index(port)]


class FixtureTable(DeterministicScheme):
    """Explicit port table: vertex -> {port: neighbor id}.  May be partial;
    requesting an unlisted port is an error (used for replay and frozen
    counterexample labelings on finite graphs)."""

    name = "fixture"

    def __init__(self, table: dict):
        self.table = {v: dict(ports) for v, ports in table.items()}

    def check_graph(self, graph):
        for v, ports in self.table.items():
            degree = graph.degree(v)
            seen_targets = set()
            for port, w in ports.items():
                if not 1 <= port <= degree:
                    raise FixtureFormatError(
                        f"port {port} out of 1..{degree} at vertex {v}")
                if w in seen_targets:
                    raise FixtureFormatError(
                        f"duplicate target {w} at vertex {v}")
                seen_targets.add(w)
                graph.slot_to(v, w)  # raises if not adjacent

    def slot_for(self, graph, v, port):
        ports = self.table.get(v)
        if ports is None or port not in ports:
            raise FixtureFormatError(
                f"fixture has no binding for (v={v!r}, port={port})")
        return graph.slot_to(v, ports[port])


def fixture_from_labeling(graph, labeling: PortLabeling) -> FixtureTable:
    """Freeze the bindings of a (possibly partial) labeling for replay."""
    table: dict = {}
    for (v, port), slot in labeling.items():
        table.setdefault(v, {})[port] = graph.neighbor(v, slot)
    return FixtureTable(table)


def load_fixture_table(text: str) -> FixtureTable:
    """Parse the port-table format: one line per vertex,
    `<id>: port1->neighbor_id port2->neighbor_id ...`."""
    table: dict = {}
    for ln in text.splitlines():
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        if ":" not in ln:
            raise FixtureFormatError(f"bad line {ln!r}")
        left, right = ln.split(":", 1)
        try:
            vid = int(left.strip())
        except ValueError as exc:
            raise FixtureFormatError(f"bad vertex id in {ln!r}") from exc
        if vid in table:
            raise FixtureFormatError(f"duplicate vertex {vid}")
        ports: dict = {}
        for tok in right.split():
            if "->" not in tok:
                raise FixtureFormatError(f"bad binding {tok!r}")
            p, w = tok.split("->", 1)
            try:
                port, target = int(p), int(w)
            except ValueError as exc:
                raise FixtureFormatError(f"bad binding {tok!r}") from exc
            if port in ports:
                raise FixtureFormatError(
                    f"duplicate port {port} at vertex {vid}")
            ports[port] = target
        table[vid] = ports
    if not table:
        raise FixtureFormatError("empty fixture table")
    return FixtureTable(table)


class DeterministicLabeling:
    """Adapter exposing a scheme through the labeling interface; consumes
    no randomness."""

    is_deterministic = True

    def __init__(self, graph: GraphFamily, scheme: DeterministicScheme):
        scheme.check_graph(graph)
        self.graph = graph
        self.scheme = scheme
        self.bindings_made = 0

    def bound_slot(self, v, port):
        return self.scheme.slot_for(self.graph, v, port)

    def exit_slot(self, v, port, stream=None) -> int:
        return self.scheme.slot_for(self.graph, v, port)

    def items(self):
        return iter(())


SCHEMES = {
    "alternating": AlternatingLine,
    "staircase": StaircasePlane,
    "spiral": SpiralPlane,
}


def make_labeling(graph: GraphFamily, mode, stream: RandomStream | None):
    """Build a labeling from a mode spec: 'lazy', 'full', a scheme name,
    or a DeterministicScheme instance."""
    if isinstance(mode, DeterministicScheme):
        return DeterministicLabeling(graph, mode)
    if mode == "lazy":
        return PortLabeling(graph)
    if mode == "full":
        if stream is None:
            raise LabelingError("full labeling needs a random stream")
        return full_uniform_labeling(graph, stream)
    if isinstance(mode, str) and mode in SCHEMES:
        return DeterministicLabeling(graph, SCHEMES[mode]())
    raise LabelingError(f"unknown labeling mode {mode!r}")
