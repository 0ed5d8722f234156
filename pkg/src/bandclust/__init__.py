"""Biclustering two-mode matrices by weighted bandwidth minimisation with a
Lotka-Volterra migration BBO."""
from .baselines import OracleResult, brute_force_optimum, hill_climb, rcm_order
from .bbo import (BboConfig, Interchange, Island, SolveResult, initialize_population,
                  interchanges_to_arrangement, migrate_position, mutate, rank_by_hsi, run_bbo)
from .errors import (BandclustError, ConfigError, DimensionError, FormatError, InputError,
                     ParseError, ScheduleError, SearchSpaceError)
from .evaluate import (Bicluster, GroundTruth, extract_blocks, generate_synthetic,
                       recovery_score)
from .io import load_matrix, save_matrix
from .matrix import (COLS, ROWS, Arrangement, DataMatrix, apply_arrangement, bandwidth_cost,
                     bandwidth_cost_delta, classic_bandwidth, scramble)
from .migration import LVParams, MigrationSchedule, Trajectory, build_schedule, integrate_lv
from .plotting import render_dotplot, render_panels

__version__ = "0.1.0"

__all__ = [
    "Arrangement",
    "BandclustError",
    "BboConfig",
    "Bicluster",
    "COLS",
    "ConfigError",
    "DataMatrix",
    "DimensionError",
    "FormatError",
    "GroundTruth",
    "InputError",
    "Interchange",
    "Island",
    "LVParams",
    "MigrationSchedule",
    "OracleResult",
    "ParseError",
    "ROWS",
    "ScheduleError",
    "SearchSpaceError",
    "SolveResult",
    "Trajectory",
    "apply_arrangement",
    "bandwidth_cost",
    "bandwidth_cost_delta",
    "brute_force_optimum",
    "build_schedule",
    "classic_bandwidth",
    "extract_blocks",
    "generate_synthetic",
    "hill_climb",
    "initialize_population",
    "integrate_lv",
    "interchanges_to_arrangement",
    "load_matrix",
    "migrate_position",
    "mutate",
    "rank_by_hsi",
    "rcm_order",
    "recovery_score",
    "render_dotplot",
    "render_panels",
    "run_bbo",
    "save_matrix",
    "scramble",
]
