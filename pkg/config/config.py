"""
Configuration module for directory paths, numeric tolerances and run defaults.

This module defines the constants used throughout the lab. It provides the
directory layout for results and profiling output, sets the default number of
worker threads and the debug flag, and collects every numeric tolerance and every
default run parameter in `DotDict` bundles so they can be read with dot access.
Environment overrides are read from a `.env` file through `python-dotenv`.

Attributes
----------
MAX_WORKERS : int
    Default number of concurrent workers for phase ensembles. Calculated as the
    minimum of 32 or the number of CPU cores available + 4, unless overridden by
    `AMO_LAB_WORKERS`.
DEBUG_FLAG : bool
    Global debug flag, read from `AMO_LAB_DEBUG`. `False` by default.
LOG_FORMAT : str
    Either ``"text"`` or ``"json"``, read from `AMO_LAB_LOG_FORMAT`.
ROOT_DIR : pathlib.Path
    Root directory of the project, determined relative to this file.
DATA_DIR : pathlib.Path
    Path to the 'data' directory.
RESULTS_DIR : pathlib.Path
    Default output directory of CLI commands (`AMO_LAB_RESULTS_DIR` overrides).
PROFILING_DIR : pathlib.Path
    Directory that receives `.prof` dumps of profiled commands.
VERSION : str
    Code version written into every manifest.
SCHEMA_PREFIX : str
    Prefix of the schema strings written in row 1 of every CSV table.
TOLERANCES : DotDict
    Absolute/relative slacks for every invariant checked by the lab.
DEFAULTS : DotDict
    Default run parameters used by the CLI and the verification suite.
EIGEN : DotDict
    Eigensolver settings (backend, sweep cap factor).

Raises
------
SystemExit
    If this file is executed as a standalone script.
"""


import os

from pathlib import Path

from dotenv import load_dotenv

from config.dotdict import DotDict


load_dotenv()

MAX_WORKERS = int(os.getenv("AMO_LAB_WORKERS", min(32, (os.cpu_count() or 1) + 4)))
DEBUG_FLAG = os.getenv("AMO_LAB_DEBUG", "false").lower() in ("1", "true", "yes")
LOG_FORMAT = os.getenv("AMO_LAB_LOG_FORMAT", "text").lower()

ROOT_DIR = Path(__file__).resolve().parent.parent

DATA_DIR = ROOT_DIR / "data"
RESULTS_DIR = Path(os.getenv("AMO_LAB_RESULTS_DIR", DATA_DIR / "results"))
PROFILING_DIR = DATA_DIR / "profiling"

VERSION = "1.0.0"
SCHEMA_PREFIX = "amo-lab"

TOLERANCES = DotDict({
    "chain_slack": 1e-10,
    "orthogonality": 1e-10,
    "residual_factor": 1e-10,  # multiplied by the norm bound 2 + 2*lambda
    "completeness": 1e-10,
    "cauchy_schwarz": 1e-12,
    "symmetry": 1e-12,
    "unitarity": 1e-10,
    "group_law": 1e-9,
    "center_tie": 1e-14,
    "log_floor": 1e-15,
    "sup_slack": 1e-12,
    "lemma_tail": 1e-12,
})

DEFAULTS = DotDict({
    "lam": 2.0,
    "alpha": "golden",
    "theta": 0.3,
    "radius": 100,
    "gamma_radius": 200,  # inner window must hold the default k_list
    "phases": 200,
    "strategy": "jittered-grid",
    "seed": 20240101,
    "t_count": 1000,
    "t_max_factor": 10.0,  # t_max = factor * N when not given
    "eta": 0.5,
    "c0": 2.0,
    "horizon": 100,
    "min_fit_points": 5,
    "good_fit_r2": 0.9,
    "positive_gamma": 0.05,
    "cf_depth": 64,
    "small_q": 100,
    "pair_count": 20,
    "verify_phases": 8,
    "k_list": "10:60:5",
    "lyapunov_steps": 100000,
    "renormalize_every": 10,
})

EIGEN = DotDict({
    "backend": os.getenv("AMO_LAB_EIGEN_BACKEND", "ql"),
    "sweep_factor": 30,
})


if __name__ == '__main__':
    raise SystemExit("Cannot run this file.")
