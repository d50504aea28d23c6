"""Simulation laboratory for basic walks on graphs with random port
labelings: graph families, lazy and deterministic labelings, the walk
automaton, exact trap-probability calculators, and seeded experiments."""

from .graphs import (Complete, ExplicitFinite, GraphError, GraphFamily, Grid,
                     GrowingTree, HexLattice, LatticeZ, Star, load_explicit)
from .labelings import (AlternatingLine, DeterministicLabeling, FixtureTable,
                        LabelingError, PortLabeling, SpiralPlane,
                        StaircasePlane, full_uniform_labeling,
                        load_fixture_table, make_labeling, resolve_exit_slot)
from .rng import RandomStream, substream
from .traps import (HexSpire, LatticeTrap, ShellBounds, StarTrap,
                    StraightPath, analytic_trap_probability,
                    detect_realized_trap, shell_bounds,
                    spire_realization_probability)
from .walker import (RotorOutcome, SimpleWalkStats, WalkOutcome, WalkState,
                     run_basic_walk, run_rotor_walk, run_simple_random_walk,
                     step)
from .experiments import (EventFrequencyResult, ExperimentResult,
                          ExperimentSpec, StraightPathEvent, TrapEntryEvent,
                          TrialRow, enumerate_full_outcomes,
                          enumerate_lazy_outcomes, grid_longest_tour,
                          kn_arcs_to_cycle, kn_coverage, mc_cycle_stats,
                          mc_event_frequency, occupancy_x, run_experiment,
                          tree_escape, write_rows_csv, write_summary_json,
                          z_process)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
