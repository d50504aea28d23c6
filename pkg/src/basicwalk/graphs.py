"""Graph families with canonical vertex identity and stable neighbor slots.

Every family exposes the same small interface: ``degree``, ``neighbor``
(1-based slot index under a fixed canonical ordering), ``origin`` and a
distance metric.  Infinite families (lattices, the growing tree) never
materialize vertex sets; finite families additionally expose their vertex
count and adjacency.

Canonical slot orderings (pinned so deterministic labelings and replays
are reproducible):

* ``LatticeZ(d)``   -- +x1, -x1, +x2, -x2, ...
* ``HexLattice``    -- +x, -x, then the parity-dependent vertical arc
* ``GrowingTree``   -- parent first (except at the root), then children in
  index order
* finite families   -- ascending neighbor index (adjacency-list order)
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field


class GraphError(Exception):
    pass


class InvalidVertexError(GraphError):
    pass


class SlotOutOfRangeError(GraphError):
    pass


class AdjacencyFormatError(GraphError):
    """Raised by the adjacency-file loader; `reason` is one of
    parse-error, self-loop, asymmetric-adjacency, disconnected-graph."""

    def __init__(self, reason: str, message: str):
        super().__init__(f"{reason}: {message}")
        self.reason = reason


class GraphFamily:
    """Immutable graph descriptor; safe to share across concurrent trials."""

    name: str = "graph"
    is_finite: bool = False

    def degree(self, v) -> int:
        raise NotImplementedError

    def neighbor(self, v, slot: int):
        raise NotImplementedError

    def origin(self):
        raise NotImplementedError

    def distance(self, v) -> int:
        return self.distance_from(self.origin(), v)

    def distance_from(self, base, v) -> int:
        raise NotImplementedError

    def neighbors(self, v) -> list:
        return [self.neighbor(v, s) for s in range(1, self.degree(v) + 1)]

    def slot_to(self, v, w) -> int:
        """Slot index of the arc v -> w; raises if w is not adjacent to v."""
        for s in range(1, self.degree(v) + 1):
            if self.neighbor(v, s) == w:
                return s
        raise InvalidVertexError(f"{w!r} is not a neighbor of {v!r}")

    def _check_slot(self, v, slot: int) -> None:
        if not 1 <= slot <= self.degree(v):
            raise SlotOutOfRangeError(
                f"slot {slot} out of range 1..{self.degree(v)} at {v!r}"
            )

    # finite families only
    def vertex_count(self) -> int:
        raise GraphError(f"{self.name} is not finite")

    def vertices(self):
        return range(self.vertex_count())

    def directed_arc_count(self) -> int:
        return sum(self.degree(v) for v in self.vertices())


@dataclass(frozen=True)
class LatticeZ(GraphFamily):
    """The integer lattice Z^d; vertices are d-tuples, 2d-regular."""

    dim: int

    def __post_init__(self):
        if self.dim < 1:
            raise GraphError(f"lattice dimension must be >= 1, got {self.dim}")

    @property
    def name(self):
        return f"z{self.dim}"

    def _check_vertex(self, v):
        if not (isinstance(v, tuple) and len(v) == self.dim
                and all(isinstance(c, int) for c in v)):
            raise InvalidVertexError(f"not a Z^{self.dim} vertex: {v!r}")

    def degree(self, v) -> int:
        self._check_vertex(v)
        return 2 * self.dim

    def neighbor(self, v, slot: int):
        self._check_vertex(v)
        self._check_slot(v, slot)
        axis = (slot - 1) // 2
        delta = 1 if slot % 2 == 1 else -1
        return v[:axis] + (v[axis] + delta,) + v[axis + 1:]

    def origin(self):
        return (0,) * self.dim

    def distance_from(self, base, v) -> int:
        self._check_vertex(v)
        self._check_vertex(base)
        return max(abs(a - b) for a, b in zip(v, base))


def _hex_neighbors(v):
    x, y = v
    vertical = (x, y + 1) if (x + y) % 2 == 0 else (x, y - 1)
    return ((x + 1, y), (x - 1, y), vertical)


@dataclass(frozen=True)
class HexLattice(GraphFamily):
    """3-regular, triangle-free hexagonal lattice in a brick-wall embedding
    on Z^2: slots 1/2 are +x/-x and slot 3 is vertical, upward when x+y is
    even and downward when x+y is odd.  Distance is graph distance from the
    base vertex via memoized BFS (synchronized; balls stay small because
    walks on this family trap quickly)."""

    _bfs_cache: dict = field(default_factory=dict, compare=False, hash=False)
    _lock: threading.Lock = field(
        default_factory=threading.Lock, compare=False, hash=False, repr=False
    )

    name = "hex"

    def _check_vertex(self, v):
        if not (isinstance(v, tuple) and len(v) == 2
                and all(isinstance(c, int) for c in v)):
            raise InvalidVertexError(f"not a hex vertex: {v!r}")

    def degree(self, v) -> int:
        self._check_vertex(v)
        return 3

    def neighbor(self, v, slot: int):
        self._check_vertex(v)
        self._check_slot(v, slot)
        return _hex_neighbors(v)[slot - 1]

    def origin(self):
        return (0, 0)

    def distance_from(self, base, v) -> int:
        self._check_vertex(v)
        self._check_vertex(base)
        if v == base:
            return 0
        with self._lock:
            entry = self._bfs_cache.get(base)
            if entry is None:
                entry = ({base: 0}, [base])  # dist map, current frontier
                self._bfs_cache[base] = entry
            dist, frontier = entry
            while v not in dist and frontier:
                nxt = []
                for u in frontier:
                    du = dist[u]
                    for w in _hex_neighbors(u):
                        if w not in dist:
                            dist[w] = du + 1
                            nxt.append(w)
                frontier = nxt
                self._bfs_cache[base] = (dist, frontier)
            return dist[v]


@dataclass(frozen=True)
class GrowingTree(GraphFamily):
    """Rooted tree where each level-l vertex has 2^l children.  Vertices are
    tuples of child indices from the root, so huge-degree vertices are
    representable without enumerating siblings."""

    name = "tree"

    def _check_vertex(self, v):
        if not isinstance(v, tuple):
            raise InvalidVertexError(f"not a tree vertex: {v!r}")
        for level, c in enumerate(v):
            if not isinstance(c, int) or not 0 <= c < (1 << level):
                raise InvalidVertexError(
                    f"child index {c!r} invalid at level {level + 1}: {v!r}"
                )

    def degree(self, v) -> int:
        self._check_vertex(v)
        level = len(v)
        if level == 0:
            return 1
        return (1 << level) + 1

    def neighbor(self, v, slot: int):
        self._check_vertex(v)
        self._check_slot(v, slot)
        if len(v) == 0:
            return (0,)
        if slot == 1:
            return v[:-1]
        return v + (slot - 2,)

    def origin(self):
        return ()

    def distance_from(self, base, v) -> int:
        self._check_vertex(v)
        self._check_vertex(base)
        common = 0
        for a, b in zip(base, v):
            if a != b:
                break
            common += 1
        return (len(base) - common) + (len(v) - common)


class FiniteGraph(GraphFamily):
    """Base for finite families with integer vertex ids 0..n-1."""

    is_finite = True

    def _check_vertex(self, v):
        if not isinstance(v, int) or not 0 <= v < self.vertex_count():
            raise InvalidVertexError(
                f"vertex {v!r} out of range 0..{self.vertex_count() - 1}"
            )

    def origin(self):
        return 0

    def distance_from(self, base, v) -> int:
        self._check_vertex(v)
        self._check_vertex(base)
        cache = self.__dict__.setdefault("_bfs_cache", {})
        dist = cache.get(base)
        if dist is None:
            dist = {base: 0}
            frontier = [base]
            while frontier:
                nxt = []
                for u in frontier:
                    for w in self.neighbors(u):
                        if w not in dist:
                            dist[w] = dist[u] + 1
                            nxt.append(w)
                frontier = nxt
            cache[base] = dist
        return dist[v]


@dataclass(frozen=True)
class Complete(FiniteGraph):
    """Complete graph K_n."""

    n: int

    def __post_init__(self):
        if self.n < 2:
            raise GraphError(f"K_n needs n >= 2, got {self.n}")

    @property
    def name(self):
        return f"k{self.n}"

    def vertex_count(self) -> int:
        return self.n

    def degree(self, v) -> int:
        self._check_vertex(v)
        return self.n - 1

    def neighbor(self, v, slot: int):
        self._check_vertex(v)
        self._check_slot(v, slot)
        return slot - 1 if slot - 1 < v else slot

    def slot_to(self, v, w) -> int:
        self._check_vertex(v)
        self._check_vertex(w)
        if v == w:
            raise InvalidVertexError("no self-loops in K_n")
        return w + 1 if w < v else w

    def distance_from(self, base, v) -> int:
        self._check_vertex(v)
        self._check_vertex(base)
        return 0 if v == base else 1


@dataclass(frozen=True)
class Star(FiniteGraph):
    """Star with hub 0 and `leaves` leaves 1..m."""

    leaves: int

    def __post_init__(self):
        if self.leaves < 1:
            raise GraphError(f"star needs >= 1 leaf, got {self.leaves}")

    @property
    def name(self):
        return f"star{self.leaves}"

    def vertex_count(self) -> int:
        return self.leaves + 1

    def degree(self, v) -> int:
        self._check_vertex(v)
        return self.leaves if v == 0 else 1

    def neighbor(self, v, slot: int):
        self._check_vertex(v)
        self._check_slot(v, slot)
        return slot if v == 0 else 0


@dataclass(frozen=True)
class Grid(FiniteGraph):
    """k x n grid G_{k,n} with row-major vertex ids."""

    rows: int
    cols: int

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise GraphError(f"grid needs positive dimensions, got "
                             f"{self.rows}x{self.cols}")
        if self.rows * self.cols < 2:
            raise GraphError("grid needs at least 2 vertices")

    @property
    def name(self):
        return f"grid{self.rows}x{self.cols}"

    def vertex_count(self) -> int:
        return self.rows * self.cols

    def _neighbor_ids(self, v):
        r, c = divmod(v, self.cols)
        out = []
        if r > 0:
            out.append(v - self.cols)
        if c > 0:
            out.append(v - 1)
        if c < self.cols - 1:
            out.append(v + 1)
        if r < self.rows - 1:
            out.append(v + self.cols)
        return out

    def degree(self, v) -> int:
        self._check_vertex(v)
        return len(self._neighbor_ids(v))

    def neighbor(self, v, slot: int):
        self._check_vertex(v)
        self._check_slot(v, slot)
        return self._neighbor_ids(v)[slot - 1]

    def distance_from(self, base, v) -> int:
        self._check_vertex(v)
        self._check_vertex(base)
        r1, c1 = divmod(base, self.cols)
        r2, c2 = divmod(v, self.cols)
        return abs(r1 - r2) + abs(c1 - c2)


@dataclass(frozen=True)
class ExplicitFinite(FiniteGraph):
    """Finite graph from explicit adjacency lists (validated symmetric,
    loop-free and connected)."""

    adjacency: tuple

    name = "explicit"

    def __post_init__(self):
        adj = tuple(tuple(row) for row in self.adjacency)
        object.__setattr__(self, "adjacency", adj)
        n = len(adj)
        if n < 2:
            raise GraphError("explicit graph needs at least 2 vertices")
        seen_edges = set()
        for u, row in enumerate(adj):
            if not row:
                raise AdjacencyFormatError(
                    "disconnected-graph", f"vertex {u} has no neighbors")
            if len(set(row)) != len(row):
                raise AdjacencyFormatError(
                    "parse-error", f"duplicate neighbor at vertex {u}")
            for w in row:
                if not 0 <= w < n:
                    raise AdjacencyFormatError(
                        "parse-error", f"neighbor id {w} out of range")
                if w == u:
                    raise AdjacencyFormatError(
                        "self-loop", f"vertex {u} lists itself")
                seen_edges.add((u, w))
        for (u, w) in seen_edges:
            if (w, u) not in seen_edges:
                raise AdjacencyFormatError(
                    "asymmetric-adjacency",
                    f"arc {u}->{w} has no reverse arc")
        # connectivity
        reached = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for u in frontier:
                for w in adj[u]:
                    if w not in reached:
                        reached.add(w)
                        nxt.append(w)
            frontier = nxt
        if len(reached) != n:
            raise AdjacencyFormatError(
                "disconnected-graph",
                f"only {len(reached)} of {n} vertices reachable from 0")

    def vertex_count(self) -> int:
        return len(self.adjacency)

    def degree(self, v) -> int:
        self._check_vertex(v)
        return len(self.adjacency[v])

    def neighbor(self, v, slot: int):
        self._check_vertex(v)
        self._check_slot(v, slot)
        return self.adjacency[v][slot - 1]


def load_explicit(text: str) -> ExplicitFinite:
    """Parse the adjacency file format:

        n <count>
        <id>: <space-separated neighbor ids>

    Lines starting with '#' are comments."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise AdjacencyFormatError("parse-error", "empty adjacency file")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "n" or not head[1].isdigit():
        raise AdjacencyFormatError(
            "parse-error", f"expected header 'n <count>', got {lines[0]!r}")
    n = int(head[1])
    rows: dict[int, list[int]] = {}
    for ln in lines[1:]:
        if ":" not in ln:
            raise AdjacencyFormatError("parse-error", f"bad line {ln!r}")
        left, right = ln.split(":", 1)
        try:
            vid = int(left.strip())
            nbrs = [int(tok) for tok in right.split()]
        except ValueError as exc:
            raise AdjacencyFormatError("parse-error", f"bad line {ln!r}") from exc
        if vid in rows:
            raise AdjacencyFormatError("parse-error", f"duplicate vertex {vid}")
        rows[vid] = nbrs
    if sorted(rows) != list(range(n)):
        raise AdjacencyFormatError(
            "parse-error", f"expected vertices 0..{n - 1}, got {sorted(rows)}")
    return ExplicitFinite(tuple(tuple(rows[v]) for v in range(n)))
