"""
Profiler: cProfile wrapper used by the `--profile` flag of every CLI command.

Attributes
----------
__name : str
    Name of the profiled command, used as the prefix of the output file.
__directory : pathlib.Path
    Directory receiving the `.prof` dump.

Methods
-------
_save_profile()
    Saves the statistics as `{name}_profiling.prof`, creating the directory if needed.
_show_profile()
    Prints the top 10 entries sorted by cumulative time.
save_show_profile()
    Saves the statistics, then displays them.

Raises
------
SystemExit
    If this file is executed as a standalone script.
"""


import cProfile
import pstats

from pathlib import Path

from config.config import PROFILING_DIR


class Profiler(cProfile.Profile):
    """
    A profiler that dumps and prints statistics for one command run.

    Parameters
    ----------
    name : str
        Name of the profiled command.
    directory : pathlib.Path, optional
        Output directory (default `PROFILING_DIR`).
    """

    def __init__(self, name: str, directory: Path | None = None):
        self.__name = name
        self.__directory = Path(directory) if directory is not None else PROFILING_DIR
        super().__init__()

    @property
    def path(self) -> Path:
        """Location of the `.prof` dump."""
        return self.__directory.joinpath(f"{self.__name}_profiling.prof")

    def _save_profile(self):
        self.__directory.mkdir(parents=True, exist_ok=True)
        self.dump_stats(self.path)

    def _show_profile(self):
        stats = pstats.Stats(str(self.path))
        stats.sort_stats("cumtime").print_stats(10)

    def save_show_profile(self) -> Path:
        """
        Save and display the profiling statistics.

        Returns
        -------
        pathlib.Path
            The written `.prof` file.
        """
        self._save_profile()
        self._show_profile()
        return self.path


if __name__ == '__main__':
    raise SystemExit("Cannot run this file.")
