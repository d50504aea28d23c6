"""Seeded experiment batches and exact combinatorial oracles.

Monte Carlo batches run independent basic-walk trials with per-trial RNG
substreams derived from (master seed, trial index), so results are
bit-reproducible and independent of worker scheduling.  Exact oracles
(occupancy process, position-indexed repeat process, tree escape products,
exhaustive labeling enumeration) provide the reference values the batches
are gated against.
"""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, asdict
from fractions import Fraction

from .graphs import Complete, GraphFamily, Grid, GrowingTree, LatticeZ
from .labelings import PortLabeling, make_labeling
from .rng import RandomStream, substream
from .traps import LatticeTrap, StraightPath, analytic_trap_probability
from .walker import run_basic_walk

_Z99 = 2.5758293035489004  # 99% two-sided normal quantile


class ExperimentError(Exception):
    pass


@dataclass(frozen=True)
class ExperimentSpec:
    """A seeded batch of basic-walk trials.

    start_policy: 'origin' or 'uniform' (uniform over finite vertices);
    init_port_policy: 'fixed' (port 1) or 'uniform'.
    """

    graph: GraphFamily
    labeling_mode: str = "lazy"
    start_policy: str = "origin"
    init_port_policy: str = "fixed"
    trials: int = 100
    budget: int = 10**6
    master_seed: int = 0

    def __post_init__(self):
        if self.trials < 1:
            raise ExperimentError(f"trials must be >= 1, got {self.trials}")
        if self.budget < 1:
            raise ExperimentError(f"budget must be >= 1, got {self.budget}")
        if self.start_policy not in ("origin", "uniform"):
            raise ExperimentError(f"unknown start policy {self.start_policy!r}")
        if self.start_policy == "uniform" and not self.graph.is_finite:
            raise ExperimentError("uniform start policy needs a finite graph")
        if self.init_port_policy not in ("fixed", "uniform"):
            raise ExperimentError(
                f"unknown init port policy {self.init_port_policy!r}")


@dataclass(frozen=True)
class TrialRow:
    trial: int
    outcome: str
    steps: int
    tail: int | None
    period: int | None
    unique_vertices: int
    unique_states: int
    max_distance: int
    monotone_escape: bool


@dataclass(frozen=True)
class MetricSummary:
    mean: float
    variance: float
    ci99_low: float
    ci99_high: float
    count: int


def summarize(values) -> MetricSummary:
    values = list(values)
    n = len(values)
    if n == 0:
        return MetricSummary(float("nan"), float("nan"),
                             float("nan"), float("nan"), 0)
    mean = math.fsum(values) / n
    if n > 1:
        var = math.fsum((x - mean) ** 2 for x in values) / (n - 1)
    else:
        var = 0.0
    half = _Z99 * math.sqrt(var / n) if n > 0 else float("nan")
    return MetricSummary(mean, var, mean - half, mean + half, n)


@dataclass
class ExperimentResult:
    spec: ExperimentSpec
    rows: list = field(default_factory=list)

    @property
    def fraction_cycled(self) -> float:
        return sum(1 for r in self.rows if r.outcome == "cycled") / len(self.rows)

    def metric(self, name: str, cycled_only: bool = False) -> MetricSummary:
        rows = self.rows
        if cycled_only:
            rows = [r for r in rows if r.outcome == "cycled"]
        return summarize(getattr(r, name) for r in rows
                         if getattr(r, name) is not None)

    def aggregates(self) -> dict:
        agg = {"trials": len(self.rows), "fraction_cycled": self.fraction_cycled}
        for name in ("steps", "unique_vertices", "unique_states",
                     "max_distance"):
            agg[name] = asdict(self.metric(name))
        for name in ("tail", "period"):
            agg[name] = asdict(self.metric(name, cycled_only=True))
        agg["fraction_monotone_escape"] = (
            sum(1 for r in self.rows if r.monotone_escape) / len(self.rows))
        return agg


def _run_one_trial(spec: ExperimentSpec, trial: int) -> TrialRow:
    stream = substream(spec.master_seed, trial)
    # draw order is pinned: start, then init port, then labeling
    if spec.start_policy == "uniform":
        start = stream.below(spec.graph.vertex_count())
    else:
        start = spec.graph.origin()
    if spec.init_port_policy == "uniform":
        init_port = stream.below(spec.graph.degree(start)) + 1
    else:
        init_port = 1
    labeling = make_labeling(spec.graph, spec.labeling_mode, stream)
    out = run_basic_walk(spec.graph, labeling, start=start,
                         init_port=init_port, budget=spec.budget,
                         stream=stream)
    return TrialRow(
        trial=trial, outcome=out.classification, steps=out.steps_taken,
        tail=out.tail, period=out.period,
        unique_vertices=out.unique_vertices, unique_states=out.unique_states,
        max_distance=out.max_distance, monotone_escape=out.monotone_escape)


def _run_trial_range(spec: ExperimentSpec, lo: int, hi: int) -> list:
    return [_run_one_trial(spec, t) for t in range(lo, hi)]


def mc_cycle_stats(spec: ExperimentSpec, workers: int | None = None) -> ExperimentResult:
    """Run the batch; rows are ordered by trial index and identical for any
    worker count."""
    if workers is None or workers <= 1 or spec.trials < 4:
        rows = _run_trial_range(spec, 0, spec.trials)
        return ExperimentResult(spec, rows)
    chunk = max(1, -(-spec.trials // (workers * 4)))
    bounds = [(lo, min(lo + chunk, spec.trials))
              for lo in range(0, spec.trials, chunk)]
    rows: list = []
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for part in pool.map(_run_trial_range,
                             [spec] * len(bounds),
                             [b[0] for b in bounds],
                             [b[1] for b in bounds]):
            rows.extend(part)
    return ExperimentResult(spec, rows)


run_experiment = mc_cycle_stats


# ---------------------------------------------------------------------------
# complete-graph coverage and arcs-to-repeat


def kn_coverage(n: int, trials: int, seed: int,
                workers: int | None = None) -> ExperimentResult:
    """Distinct vertices among the first n-1 steps of a lazy walk on K_n.
    A walk that repeats a state earlier never visits new vertices afterward,
    so running with budget n-1 and counting unique vertices is exact."""
    if n < 2:
        raise ExperimentError(f"complete graph needs n >= 2, got {n}")
    spec = ExperimentSpec(graph=Complete(n), labeling_mode="lazy",
                          trials=trials, budget=n - 1, master_seed=seed)
    return mc_cycle_stats(spec, workers=workers)


def kn_arcs_to_cycle(n: int, trials: int, seed: int,
                     workers: int | None = None) -> ExperimentResult:
    """Steps until the first repeated (vertex, port) state on K_n; each
    pre-repeat step traverses a distinct directed labeled arc, so this is
    the count of arcs traversed before cycling.  The budget is pigeonhole
    safe, so every trial cycles."""
    if n < 2:
        raise ExperimentError(f"complete graph needs n >= 2, got {n}")
    spec = ExperimentSpec(graph=Complete(n), labeling_mode="lazy",
                          trials=trials, budget=2 * n * (n - 1) + 1,
                          master_seed=seed)
    return mc_cycle_stats(spec, workers=workers)


# ---------------------------------------------------------------------------
# occupancy process X: x_1 = 1, each next value uniform over [n] minus the
# previous value; X_n = distinct values among x_1..x_n


def occupancy_x_exact(n: int) -> Fraction:
    if n < 2:
        raise ExperimentError(f"occupancy process needs n >= 2, got {n}")
    return 1 + (n - 1) * (1 - Fraction(n - 2, n - 1) ** (n - 1))


def occupancy_x_brute_force(n: int) -> Fraction:
    """Expected distinct count by full enumeration; (n-1)^(n-1) sequences."""
    if n < 2:
        raise ExperimentError(f"occupancy process needs n >= 2, got {n}")
    if n > 6:
        raise ExperimentError(f"brute force limited to n <= 6, got {n}")
    total = Fraction(0)

    def rec(prev, seen, draws_left, prob):
        nonlocal total
        if draws_left == 0:
            total += prob * len(seen)
            return
        p = prob / (n - 1)
        for x in range(1, n + 1):
            if x != prev:
                rec(x, seen | {x}, draws_left - 1, p)

    rec(1, {1}, n - 1, Fraction(1))
    return total


def occupancy_x_mc(n: int, trials: int, seed: int) -> MetricSummary:
    if n < 2:
        raise ExperimentError(f"occupancy process needs n >= 2, got {n}")
    counts = []
    for trial in range(trials):
        stream = substream(seed, trial)
        prev = 1
        seen = {1}
        for _ in range(n - 1):
            # uniform over [n] minus prev: draw in [1, n-1], shift past prev
            x = stream.below(n - 1) + 1
            if x >= prev:
                x += 1
            seen.add(x)
            prev = x
        counts.append(len(seen))
    return summarize(counts)


# ---------------------------------------------------------------------------
# repeat process Z: positions cycle 1..n; each step draws a uniform value
# in [n]; stop when the (position, value) pair repeats


def z_process_exact(n: int, as_float: bool = False):
    """Expected stopping index via the survival decomposition
    E[K] = sum_t Pr(K >= t): conditioned on survival the previous values at
    a position are distinct, so a pass-p step stops with hazard (p-1)/n.
    Exact rationals by default; float mode for large n."""
    if n < 1:
        raise ExperimentError(f"process size must be >= 1, got {n}")
    one = 1.0 if as_float else Fraction(1)
    total = one * n  # pass 1 never stops: contributes n survival terms
    survive_prefix = one  # Pr(survive all full passes so far)
    for p in range(2, n + 2):
        q_prev = (one * (n - p + 2)) / n
        survive_prefix *= q_prev ** n
        q = (one * (n - p + 1)) / n
        if q == 0:
            total += survive_prefix
        else:
            total += survive_prefix * (1 - q ** n) / (1 - q)
    return total


def z_process_brute_force(n: int) -> Fraction:
    """Expected stopping index by exhaustive enumeration of draw sequences."""
    if n < 1:
        raise ExperimentError(f"process size must be >= 1, got {n}")
    if n > 3:
        raise ExperimentError(f"brute force limited to n <= 3, got {n}")
    total = Fraction(0)

    def rec(step, seen, prob):
        nonlocal total
        position = (step - 1) % n + 1
        p = prob / n
        for value in range(1, n + 1):
            if (position, value) in seen:
                total += p * step
            else:
                rec(step + 1, seen | {(position, value)}, p)

    rec(1, frozenset(), Fraction(1))
    return total


def z_process_mc(n: int, trials: int, seed: int) -> MetricSummary:
    if n < 1:
        raise ExperimentError(f"process size must be >= 1, got {n}")
    stops = []
    for trial in range(trials):
        stream = substream(seed, trial)
        seen = set()
        step = 1
        while True:
            position = (step - 1) % n
            pair = position * n + stream.below(n)
            if pair in seen:
                stops.append(step)
                break
            seen.add(pair)
            step += 1
    return summarize(stops)


def z_process(n: int, mode: str = "exact", trials: int | None = None,
              seed: int | None = None):
    if mode == "exact":
        return z_process_exact(n, as_float=n > 60)
    if mode == "brute-force":
        return z_process_brute_force(n)
    if mode == "monte-carlo":
        if trials is None or seed is None:
            raise ExperimentError("monte-carlo mode needs trials and seed")
        return z_process_mc(n, trials, seed)
    raise ExperimentError(f"unknown mode {mode!r}")


def occupancy_x(n: int, mode: str = "exact", trials: int | None = None,
                seed: int | None = None):
    if mode == "exact":
        return occupancy_x_exact(n)
    if mode == "brute-force":
        return occupancy_x_brute_force(n)
    if mode == "monte-carlo":
        if trials is None or seed is None:
            raise ExperimentError("monte-carlo mode needs trials and seed")
        return occupancy_x_mc(n, trials, seed)
    raise ExperimentError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# growing-tree escape


def tree_escape_exact_product(depth_cap: int) -> Fraction:
    """Probability that every step through depth `depth_cap` moves away from
    the root: product over levels of 1 - 1/(2^(m-1) + 1)."""
    if depth_cap < 2:
        raise ExperimentError(f"depth cap must be >= 2, got {depth_cap}")
    p = Fraction(1)
    for m in range(2, depth_cap + 1):
        p *= 1 - Fraction(1, (1 << (m - 1)) + 1)
    return p


def tree_escape_factor(m: int) -> Fraction:
    return 1 - Fraction(1, (1 << (m - 1)) + 1)


def tree_escape_limit_estimate(terms: int = 200) -> float:
    p = 1.0
    for m in range(2, terms + 1):
        p *= 1 - 1 / (2 ** (m - 1) + 1)
    return p


@dataclass(frozen=True)
class TreeEscapeResult:
    depth_cap: int
    trials: int
    empirical_frequency: float
    ci99_half_width: float
    exact_truncated_product: Fraction
    limit_estimate: float
    exceeds_e_minus_2: bool


def tree_escape(depth_cap: int, trials: int, seed: int,
                budget: int | None = None) -> TreeEscapeResult:
    """Empirical frequency of monotone escape to depth `depth_cap` on the
    growing tree, against the exact truncated product."""
    if budget is None:
        budget = depth_cap
    if budget < depth_cap:
        raise ExperimentError("budget must cover the depth cap")
    tree = GrowingTree()
    hits = 0
    for trial in range(trials):
        stream = substream(seed, trial)
        labeling = PortLabeling(tree)
        out = run_basic_walk(tree, labeling, budget=depth_cap, stream=stream)
        if out.monotone_escape and out.max_distance == depth_cap:
            hits += 1
    freq = hits / trials
    half = _Z99 * math.sqrt(freq * (1 - freq) / trials)
    exact = tree_escape_exact_product(depth_cap)
    limit = tree_escape_limit_estimate()
    return TreeEscapeResult(
        depth_cap=depth_cap, trials=trials, empirical_frequency=freq,
        ci99_half_width=half, exact_truncated_product=exact,
        limit_estimate=limit,
        exceeds_e_minus_2=float(exact) > math.exp(-2))


# ---------------------------------------------------------------------------
# event frequencies: straight paths and the lattice bounce trap


@dataclass(frozen=True)
class StraightPathEvent:
    graph: GraphFamily
    length: int

    def analytic(self) -> Fraction:
        degree = self.graph.degree(self.graph.origin())
        return analytic_trap_probability(StraightPath(degree, self.length))

    def sample(self, stream: RandomStream) -> bool:
        """Fresh lazy labeling: do the first `length` steps all follow the
        designated outward path (slot 1 at every vertex)?"""
        graph = self.graph
        labeling = PortLabeling(graph)
        v = graph.origin()
        port = 1
        for _ in range(self.length):
            slot = labeling.exit_slot(v, port, stream)
            if slot != 1:
                return False
            v = graph.neighbor(v, slot)
            port = (port % graph.degree(v)) + 1
        return True


@dataclass(frozen=True)
class TrapEntryEvent:
    """Realization of the lattice bounce trap at a fresh entry on Z^d: the
    walk entering (v, 1) makes d out-and-back excursions to the designated
    neighbors (slots 1..d in order), after which the state repeats."""

    dim: int

    def analytic(self) -> Fraction:
        return analytic_trap_probability(LatticeTrap(self.dim))

    def sample(self, stream: RandomStream) -> bool:
        graph = LatticeZ(self.dim)
        labeling = PortLabeling(graph)
        v = graph.origin()
        port = 1
        for j in range(1, self.dim + 1):
            slot = labeling.exit_slot(v, port, stream)
            if slot != j:
                return False
            w = graph.neighbor(v, slot)
            wport = (port % graph.degree(w)) + 1
            back = labeling.exit_slot(w, wport, stream)
            if graph.neighbor(w, back) != v:
                return False
            port = (wport % graph.degree(v)) + 1
        return True


@dataclass(frozen=True)
class EventFrequencyResult:
    samples: int
    hits: int
    empirical: float
    ci99_half_width: float
    analytic: Fraction

    @property
    def within_3_sigma(self) -> bool:
        p = float(self.analytic)
        sigma = math.sqrt(p * (1 - p) / self.samples)
        return abs(self.empirical - p) <= 3 * sigma


def mc_event_frequency(event, samples: int, seed: int) -> EventFrequencyResult:
    if samples < 1:
        raise ExperimentError(f"samples must be >= 1, got {samples}")
    hits = 0
    for trial in range(samples):
        stream = substream(seed, trial)
        if event.sample(stream):
            hits += 1
    freq = hits / samples
    half = _Z99 * math.sqrt(freq * (1 - freq) / samples)
    return EventFrequencyResult(samples=samples, hits=hits, empirical=freq,
                                ci99_half_width=half,
                                analytic=event.analytic())


# ---------------------------------------------------------------------------
# grid longest tours


@dataclass(frozen=True)
class GridTourRow:
    rows: int
    cols: int
    trials: int
    max_unique_vertices: int
    mean_unique_vertices: float


@dataclass(frozen=True)
class GridTourReport:
    rows: list
    log_fit_slope: float
    log_fit_intercept: float


def grid_longest_tour(k: int, n_values, trials: int, seed: int,
                      workers: int | None = None) -> GridTourReport:
    """Max and mean distinct vertices visited per walk on grids G_{k,n},
    uniform starts, pigeonhole budgets; fits max against log n."""
    if k < 1:
        raise ExperimentError(f"grid height must be >= 1, got {k}")
    table = []
    for n in n_values:
        if n < 1 or k * n < 2:
            raise ExperimentError(f"invalid grid {k}x{n}")
        graph = Grid(k, n)
        spec = ExperimentSpec(
            graph=graph, labeling_mode="lazy", start_policy="uniform",
            trials=trials, budget=2 * graph.directed_arc_count() + 1,
            master_seed=seed)
        result = mc_cycle_stats(spec, workers=workers)
        uniques = [r.unique_vertices for r in result.rows]
        table.append(GridTourRow(
            rows=k, cols=n, trials=trials,
            max_unique_vertices=max(uniques),
            mean_unique_vertices=math.fsum(uniques) / len(uniques)))
    xs = [math.log(row.cols) for row in table]
    ys = [row.max_unique_vertices for row in table]
    slope, intercept = _least_squares(xs, ys)
    return GridTourReport(rows=table, log_fit_slope=slope,
                          log_fit_intercept=intercept)


def _least_squares(xs, ys):
    n = len(xs)
    if n < 2:
        return float("nan"), float("nan")
    mx = math.fsum(xs) / n
    my = math.fsum(ys) / n
    sxx = math.fsum((x - mx) ** 2 for x in xs)
    sxy = math.fsum((x - mx) * (y - my) for x, y in zip(xs, ys))
    slope = sxy / sxx if sxx else float("nan")
    return slope, my - slope * mx


# ---------------------------------------------------------------------------
# exhaustive oracles for small finite graphs


def enumerate_lazy_outcomes(graph: GraphFamily, start=None, init_port: int = 1,
                            budget: int | None = None) -> dict:
    """Exact outcome distribution of the lazy walk by branching over every
    fresh binding; returns {(tail, period, unique_vertices): Fraction}."""
    if start is None:
        start = graph.origin()
    if budget is None:
        budget = 2 * graph.directed_arc_count() + 1
    dist: dict = {}

    def rec(pos, port, bound, assigned, seen, path_vertices, step, prob):
        state = (pos, port)
        if state in seen:
            tail = seen[state]
            key = (tail, step - tail, len(path_vertices))
            dist[key] = dist.get(key, Fraction(0)) + prob
            return
        if step >= budget:
            key = (None, None, len(path_vertices))
            dist[key] = dist.get(key, Fraction(0)) + prob
            return
        seen = dict(seen)
        seen[state] = step
        slot = bound.get(state)
        if slot is not None:
            choices = [(slot, prob, bound, assigned)]
        else:
            taken = assigned.get(pos, frozenset())
            free = [s for s in range(1, graph.degree(pos) + 1)
                    if s not in taken]
            p = prob / len(free)
            choices = []
            for s in free:
                nb = dict(bound)
                nb[state] = s
                na = dict(assigned)
                na[pos] = taken | {s}
                choices.append((s, p, nb, na))
        for s, p, nb, na in choices:
            w = graph.neighbor(pos, s)
            rec(w, (port % graph.degree(w)) + 1, nb, na,
                seen, path_vertices | {w}, step + 1, p)

    rec(start, init_port, {}, {}, {}, frozenset({start}), 0, Fraction(1))
    return dist


def enumerate_full_outcomes(graph: GraphFamily, start=None,
                            init_port: int = 1,
                            budget: int | None = None) -> dict:
    """Exact outcome distribution over all full labelings (product of port
    permutations per vertex); must match enumerate_lazy_outcomes."""
    from itertools import permutations, product

    if start is None:
        start = graph.origin()
    if budget is None:
        budget = 2 * graph.directed_arc_count() + 1
    verts = list(graph.vertices())
    per_vertex = [list(permutations(range(1, graph.degree(v) + 1)))
                  for v in verts]
    total = 1
    for opts in per_vertex:
        total *= len(opts)
    dist: dict = {}
    weight = Fraction(1, total)
    for combo in product(*per_vertex):
        # combo[i][port-1] = slot for port at verts[i]
        slot_of = {v: perm for v, perm in zip(verts, combo)}
        pos, port = start, init_port
        seen = {}
        path_vertices = {start}
        step = 0
        while True:
            state = (pos, port)
            if state in seen:
                key = (seen[state], step - seen[state], len(path_vertices))
                break
            if step >= budget:
                key = (None, None, len(path_vertices))
                break
            seen[state] = step
            s = slot_of[pos][port - 1]
            w = graph.neighbor(pos, s)
            port = (port % graph.degree(w)) + 1
            pos = w
            path_vertices.add(pos)
            step += 1
        dist[key] = dist.get(key, Fraction(0)) + weight
    return dist


# ---------------------------------------------------------------------------
# output files

CSV_COLUMNS = ["trial", "outcome", "steps", "tail", "period",
               "unique_vertices", "unique_states", "max_distance",
               "monotone_escape"]


def write_rows_csv(path, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for r in rows:
            writer.writerow([
                r.trial, r.outcome, r.steps,
                "" if r.tail is None else r.tail,
                "" if r.period is None else r.period,
                r.unique_vertices, r.unique_states, r.max_distance,
                int(r.monotone_escape)])


def _jsonable(value):
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def write_summary_json(path, summary: dict) -> None:
    with open(path, "w") as fh:
        json.dump(_jsonable(summary), fh, indent=2, sort_keys=True)
        fh.write("\n")
