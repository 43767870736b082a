"""
Command-line front end of the lab.

Commands
--------
spectrum
    Eigenvalues (and optionally eigenvectors) of one truncated operator.
gamma
    Phase-averaged overlap decay, its rate, and the averaged center mass profile.
resonances
    Resonant integers of a phase and the allowed decay windows between them.
verify
    The invariant verification suite.

Every command validates its effective configuration against `config.schema`
before computing, writes its tables and a ``<command>_manifest.json`` into an
existing output directory and returns an exit code: 0 on success, 1 on
configuration or validation errors, 2 on I/O errors and 3 on invariant
violations. ``--config manifest.json`` replays the configuration stored in a
manifest.

Functions
---------
cli
    The click command group.
run(argv)
    Run the group without letting click exit the interpreter; returns the exit code.

Raises
------
SystemExit
    If this file is executed as a standalone script.
"""


import time

from functools import partial, wraps

import click
import pandas as pd

from config.config import DEFAULTS, EIGEN, MAX_WORKERS, RESULTS_DIR, VERSION
from config.logger import Logger
from config.profiler import Profiler
from config.schema import validate_config
from scripts.arithmetic import resonances as scan_resonances
from scripts.dynamics import TimeGrid
from scripts.eigensolve import eigh_tridiagonal
from scripts.evaluation import random_pairs, run_verification
from scripts.expectation import (PhasePlan, SpecTemplate, corrupted_solver, default_solver, phase_profile,
                                 planted_solver, profile_points, two_term_check)
from scripts.hamiltonian import OperatorSpec, build
from scripts.localization import centers, decay_fit, lyapunov_transfer, typical_decay_rate
from utils.errors import ConfigError, InsufficientDataError, LabError, OutputError
from utils.format import parse_alpha, parse_int_list, parse_pairs, parse_window
from utils.io import (_to_csv, build_manifest, ensure_output_dir, export_records, export_resonances,
                      export_spectrum, read_json, write_json)


log = Logger(__name__)


def _load_config(ctx: click.Context, param: click.Parameter, value) -> None:
    if value is None:
        return
    try:
        document = read_json(value)
    except ValueError as error:
        raise ConfigError(f"{value} is not valid JSON: {error}") from error
    if "command" in document:
        ctx.default_map = {document["command"]: document.get("config", {})}
    else:
        ctx.default_map = {name: document for name in ("spectrum", "gamma", "resonances", "verify")}


def _base_options(func):
    func = click.option("--alpha", default=DEFAULTS.alpha, show_default=True,
                        help="Frequency in (0, 1) or an alias (golden, sqrt2, silver).")(func)
    func = click.option("--seed", type=int, default=DEFAULTS.seed, show_default=True)(func)
    func = click.option("--out", type=click.Path(file_okay=False), default=str(RESULTS_DIR), show_default=True,
                        help="Existing output directory.")(func)
    func = click.option("--profile", is_flag=True, help="Dump cProfile statistics of the run.")(func)
    return func


def _operator_options(func=None, *, radius: int = DEFAULTS.radius):
    if func is None:
        return partial(_operator_options, radius=radius)
    func = click.option("--lambda", "lam", type=float, default=DEFAULTS.lam, show_default=True,
                        help="Coupling lambda > 0.")(func)
    func = click.option("--window", default=str(radius), show_default=True,
                        help="'radius' or 'n_min:n_max'.")(func)
    func = click.option("--backend", type=click.Choice(["ql", "lapack"]), default=EIGEN.backend,
                        show_default=True)(func)
    return _base_options(func)


def _command(name: str):
    """
    Wrap a command body with validation, profiling, timing and the manifest.

    The body receives the validated configuration and the output directory and
    returns ``(outputs, resolved)``.
    """
    def decorator(body):
        @wraps(body)
        def wrapper(**params):
            out = params.pop("out")
            config = validate_config(name, dict(params))
            directory = ensure_output_dir(out)
            log.info({"event": "command", "command": name, "config": config, "out": str(directory)})

            prof = Profiler(name=name) if config["profile"] else None
            if prof:
                prof.enable()
            start = time.perf_counter()
            try:
                outputs, resolved = body(config, directory)
            finally:
                if prof:
                    prof.disable()
                    prof.save_show_profile()
            timings = {"total_seconds": round(time.perf_counter() - start, 6)}

            manifest = build_manifest(name, config, resolved, outputs, timings)
            write_json(manifest, directory / f"{name}_manifest.json")
            log.info({"event": "done", "command": name, "outputs": manifest["outputs"], "timings": timings})
        return wrapper
    return decorator


def _operator_spec(config: dict, theta: float) -> OperatorSpec:
    n_min, n_max = parse_window(config["window"])
    return OperatorSpec(lam=config["lam"], alpha=parse_alpha(config["alpha"]), theta=theta, n_min=n_min, n_max=n_max)


@click.group(name="amo-lab", context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--config", "config_path", type=click.Path(dir_okay=False), callback=_load_config, is_eager=True,
              expose_value=False, help="Replay the configuration of a manifest (or a plain config file).")
@click.version_option(VERSION, prog_name="amo-lab")
def cli():
    """Numerical lab for exponential dynamical localization of the almost Mathieu operator."""


@cli.command()
@_operator_options
@click.option("--theta", type=float, default=DEFAULTS.theta, show_default=True)
@click.option("--dump-eig", is_flag=True, help="Also write the eigenvector matrix.")
@_command("spectrum")
def spectrum(config: dict, out):
    """Eigenvalues of one truncated operator."""
    spec = _operator_spec(config, config["theta"])
    eig = eigh_tridiagonal(build(spec), config["backend"])
    outputs = export_spectrum(eig, out, config["dump_eig"])
    return outputs, {"spec": spec.to_dict(), "dimension": spec.dimension}


@cli.command()
@_operator_options(radius=DEFAULTS.gamma_radius)
@click.option("--phases", type=click.IntRange(min=1), default=DEFAULTS.phases, show_default=True)
@click.option("--strategy", type=click.Choice(["midpoint-grid", "jittered-grid", "uniform-random"]),
              default=DEFAULTS.strategy, show_default=True)
@click.option("--k-list", default=DEFAULTS.k_list, show_default=True, help="'start:stop:step' or 'a,b,c'.")
@click.option("--workers", type=click.IntRange(min=1), default=MAX_WORKERS, show_default=True)
@click.option("--synthetic-rate", type=float, default=None,
              help="Replace eigensolves by planted exponential eigensystems with this rate.")
@_command("gamma")
def gamma(config: dict, out):
    """Decay rate of the phase-averaged overlap sum."""
    n_min, n_max = parse_window(config["window"])
    template = SpecTemplate(lam=config["lam"], alpha=parse_alpha(config["alpha"]), n_min=n_min, n_max=n_max)
    plan = PhasePlan(count=config["phases"], strategy=config["strategy"], seed=config["seed"])
    k_list = parse_int_list(config["k_list"])
    if len(k_list) < DEFAULTS.min_fit_points:
        raise InsufficientDataError(f"k-list needs >= {DEFAULTS.min_fit_points} entries, got {len(k_list)}")
    rate = config["synthetic_rate"]
    solver = planted_solver(rate) if rate else default_solver(config["backend"])

    profile = phase_profile(template, plan, 0, k_list, solver, config["workers"])
    fit = decay_fit(profile_points(profile.overlap))
    poor_fit = not (fit.gamma_hat > DEFAULTS.positive_gamma and fit.r_squared >= DEFAULTS.good_fit_r2)
    if poor_fit:
        log.warning({"event": "poor_fit", "gamma_hat": fit.gamma_hat, "r_squared": fit.r_squared})

    summary = {"fit": fit.to_dict(), "poor_fit": poor_fit, "window": [n_min, n_max], "k_list": k_list,
               "phases": plan.to_dict(), "synthetic_rate": rate}
    try:
        summary["two_term"] = two_term_check(profile.center_mass).to_dict()
    except (InsufficientDataError, RuntimeError) as error:
        log.warning(f"two-term fit skipped: {error}")
        summary["two_term"] = None
    if not rate:
        summary["comparator"] = _lyapunov_comparator(template, solver)

    table = pd.DataFrame({"k": [r.sites[1] for r in profile.overlap],
                          "mean": [r.mean for r in profile.overlap],
                          "std_error": [r.std_error for r in profile.overlap],
                          "count": [r.count for r in profile.overlap]})
    outputs = [_to_csv(table, out / "gamma_table.csv", "gamma_table"),
               export_records(profile.center_mass, out, "center_mass"),
               write_json(summary, out / "gamma_summary.json")]
    return outputs, {"template": template.to_dict(), "k_list": k_list}


def _lyapunov_comparator(template: SpecTemplate, solver) -> dict:
    spec = template.at(DEFAULTS.theta)
    eig = solver(spec)
    # an energy whose eigenvector sits mid-window lies next to the spectrum
    energy = float(eig.values[abs(centers(eig).center_of).argmin()])
    comparator = {"theta": spec.theta, "energy": energy,
                  "lyapunov": lyapunov_transfer(spec.lam, spec.alpha, spec.theta, energy)}
    try:
        comparator["eigenfunction_decay"] = typical_decay_rate(eig)
    except InsufficientDataError:
        comparator["eigenfunction_decay"] = None
    return comparator


@cli.command()
@_base_options
@click.option("--theta", type=float, default=DEFAULTS.theta, show_default=True)
@click.option("--eta", type=click.FloatRange(min=0, min_open=True), default=DEFAULTS.eta, show_default=True)
@click.option("--c0", type=click.FloatRange(min=1), default=DEFAULTS.c0, show_default=True)
@click.option("-K", "--horizon", type=click.IntRange(min=1), default=DEFAULTS.horizon, show_default=True,
              help="Scan |k| <= K.")
@_command("resonances")
def resonances(config: dict, out):
    """Eta-resonant integers of a phase and the allowed windows between them."""
    alpha = parse_alpha(config["alpha"])
    report = scan_resonances(config["theta"], alpha, config["eta"], config["horizon"], config["c0"])
    outputs = export_resonances(report, out)
    return outputs, {"alpha": alpha, "theta": report.theta, "resonant": len(report.resonant_k),
                     "windows": len(report.windows)}


@cli.command()
@_operator_options
@click.option("--theta", type=float, default=DEFAULTS.theta, show_default=True)
@click.option("--t-max", type=float, default=None, help="Largest grid time (default 10 N).")
@click.option("--t-count", type=click.IntRange(min=2), default=DEFAULTS.t_count, show_default=True)
@click.option("--pairs", default=None, help="'k:l,k:l,...' (default: random inner-window pairs).")
@click.option("--pair-count", type=click.IntRange(min=1), default=DEFAULTS.pair_count, show_default=True)
@click.option("--phases", type=click.IntRange(min=1), default=DEFAULTS.verify_phases, show_default=True)
@click.option("--workers", type=click.IntRange(min=1), default=MAX_WORKERS, show_default=True)
@click.option("--inject-fault", is_flag=True, hidden=True)
@_command("verify")
def verify(config: dict, out):
    """Run the invariant suite; exit 3 when any check fails."""
    spec = _operator_spec(config, config["theta"])
    if config["pairs"] is None:
        pairs = random_pairs(spec, config["pair_count"], config["seed"])
    else:
        pairs = parse_pairs(config["pairs"])
        if not pairs:
            raise ConfigError("pair list is empty")
    grid = TimeGrid.for_dimension(spec.dimension, config["t_count"], config["t_max"])
    plan = PhasePlan(count=config["phases"], seed=config["seed"])
    solver = default_solver(config["backend"])
    if config["inject_fault"]:
        solver = corrupted_solver(solver)

    verdict = run_verification(spec, pairs, grid, plan, solver, config["workers"], config["seed"])
    path = write_json(verdict.to_dict(), out / "verify.json")
    resolved = {"spec": spec.to_dict(), "pairs": [list(p) for p in pairs], "grid": [grid.t_max, grid.count],
                "passed": verdict.passed}
    write_json(build_manifest("verify", config, resolved, [path], {}), out / "verify_manifest.json")
    verdict.raise_for_failures()
    return [path], resolved


def run(argv: list[str] | None = None) -> int:
    """
    Run the CLI and translate every failure into an exit code.

    Parameters
    ----------
    argv : list of str, optional
        Arguments without the program name (default: ``sys.argv[1:]``).

    Returns
    -------
    int
        0 ok, 1 configuration error, 2 I/O error, 3 invariant violation.
    """
    try:
        result = cli.main(args=argv, prog_name="amo-lab", standalone_mode=False)
    except click.exceptions.Abort:
        return 1
    except click.ClickException as error:
        error.show()
        return 1
    except LabError as error:
        log.error(f"{type(error).__name__}: {error}")
        for failure in getattr(error, "failures", []):
            log.error(failure)
        return error.exit_code
    except OSError as error:
        log.error(f"I/O error: {error}")
        return OutputError.exit_code
    return result if isinstance(result, int) else 0


if __name__ == '__main__':
    raise SystemExit("Cannot run this file.")
