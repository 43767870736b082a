"""
Utility functions for CSV tables, JSON summaries and run manifests.

Every table starts with a ``# schema: amo-lab/<table>/v1`` comment in row 1 and is
written comma separated without an index. JSON files use sorted keys and a fixed
indent so identical runs produce identical bytes. Output directories are never
created here: a missing directory is an I/O error for the caller to report.

Functions
---------
_to_csv(df, path, table)
    Saves a DataFrame as a versioned CSV table.
_from_csv(path)
    Reads a versioned CSV table back into a DataFrame.
table_schema(path)
    The schema string of a written table.
ensure_output_dir(path)
    Resolves an existing output directory.
write_json(payload, path)
    Saves a JSON document.
read_json(path)
    Loads a JSON document.
export_spectrum(eig, out, dump_eig)
    Saves eigenvalues and, optionally, the eigenvector matrix.
export_records(records, out, name)
    Saves expectation records as a table.
export_resonances(report, out)
    Saves resonant integers and allowed windows.
build_manifest(command, config, resolved, outputs, timings)
    Assembles a run manifest.

Raises
------
SystemExit
    If this file is executed as a standalone script.
"""


import json

from os import PathLike
from pathlib import Path

import numpy as np
import pandas as pd

from config.config import SCHEMA_PREFIX, VERSION
from utils.errors import OutputError


def _schema(table: str) -> str:
    return f"{SCHEMA_PREFIX}/{table}/v1"


def _to_csv(df: pd.DataFrame, path: str | PathLike[str], table: str) -> Path:
    """
    Save a DataFrame as a versioned CSV table.

    Parameters
    ----------
    df : pd.DataFrame
        The table to be saved.
    path : str or PathLike
        Target file; its directory must exist.
    table : str
        Table name used in the schema string.

    Returns
    -------
    pathlib.Path
        The written file.

    Raises
    ------
    OutputError
        If the file cannot be written.
    """
    path = Path(path)
    try:
        with path.open("w", encoding="utf-8", newline="") as handle:
            handle.write(f"# schema: {_schema(table)}\n")
            df.to_csv(handle, sep=",", index=False, lineterminator="\n")
    except OSError as error:
        raise OutputError(f"cannot write {path}: {error}") from error
    return path


def _from_csv(path: str | PathLike[str]) -> pd.DataFrame:
    """
    Load a versioned CSV table into a DataFrame (the schema row is skipped).

    Raises
    ------
    OutputError
        If the file cannot be read.
    """
    try:
        return pd.read_csv(path, sep=",", encoding="utf-8", comment="#")
    except OSError as error:
        raise OutputError(f"cannot read {path}: {error}") from error


def table_schema(path: str | PathLike[str]) -> str:
    try:
        with Path(path).open(encoding="utf-8") as handle:
            first = handle.readline().strip()
    except OSError as error:
        raise OutputError(f"cannot read {path}: {error}") from error
    return first.removeprefix("# schema:").strip()


def ensure_output_dir(path: str | PathLike[str]) -> Path:
    """
    Return `path` as a directory that already exists.

    Raises
    ------
    OutputError
        If `path` is missing or not a directory.
    """
    path = Path(path)
    if not path.is_dir():
        raise OutputError(f"output directory {path} does not exist")
    return path


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, Path):
        return str(value)
    return value


def write_json(payload: dict, path: str | PathLike[str]) -> Path:
    """
    Save `payload` with sorted keys and indent 2.

    Raises
    ------
    OutputError
        If the file cannot be written.
    """
    path = Path(path)
    try:
        with path.open("w", encoding="utf-8", newline="") as handle:
            json.dump(_jsonable(payload), handle, indent=2, sort_keys=True, allow_nan=True)
            handle.write("\n")
    except OSError as error:
        raise OutputError(f"cannot write {path}: {error}") from error
    return path


def read_json(path: str | PathLike[str]) -> dict:
    try:
        with Path(path).open(encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as error:
        raise OutputError(f"cannot read {path}: {error}") from error


def export_spectrum(eig, out: Path, dump_eig: bool = False) -> list[Path]:
    """
    Save eigenvalues (columns index, energy) and optionally the eigenvector matrix.

    The eigenvector dump has one row per site and one column ``s<index>`` per
    eigenvector.
    """
    written = [_to_csv(pd.DataFrame({"index": np.arange(eig.dimension), "energy": eig.values}),
                       out / "eigenvalues.csv", "eigenvalues")]
    if dump_eig:
        vectors = pd.DataFrame(eig.vectors, columns=[f"s{s}" for s in range(eig.dimension)])
        vectors.insert(0, "site", eig.sites)
        written.append(_to_csv(vectors, out / "eigenvectors.csv", "eigenvectors"))
    return written


def export_records(records, out: Path, name: str) -> Path:
    """Save a list of `ExpectationRecord` as the table `name`."""
    return _to_csv(pd.DataFrame([record.to_row() for record in records]), out / f"{name}.csv", name)


def export_resonances(report, out: Path) -> list[Path]:
    """Save the resonant integers of a `ResonanceReport` and its allowed windows."""
    ks = np.asarray(report.resonant_k, dtype=np.int64)
    resonant = pd.DataFrame({"k": ks, "abs_k": np.abs(ks)})
    windows = pd.DataFrame([{"lower": w.lower, "upper": w.upper, "closed": w.closed} for w in report.windows],
                           columns=["lower", "upper", "closed"])
    return [_to_csv(resonant, out / "resonances.csv", "resonances"),
            _to_csv(windows, out / "windows.csv", "windows")]


def build_manifest(command: str, config: dict, resolved: dict, outputs: list, timings: dict) -> dict:
    """
    Assemble a run manifest.

    Parameters
    ----------
    command : str
        Command name.
    config : dict
        Effective configuration with every default explicit; re-running it
        reproduces the outputs.
    resolved : dict
        Derived parameters (numeric alpha, window, time grid).
    outputs : list
        Written files (names relative to the output directory).
    timings : dict
        Wall-clock seconds per stage.

    Returns
    -------
    dict
        The manifest document.
    """
    return {
        "schema": _schema("manifest"),
        "command": command,
        "version": VERSION,
        "config": config,
        "resolved": resolved,
        "seed": config.get("seed"),
        "outputs": [Path(p).name for p in outputs],
        "timings": timings,
    }


if __name__ == '__main__':
    raise SystemExit("Cannot run this file.")
