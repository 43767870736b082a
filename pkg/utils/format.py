"""
Parsers for command-line values.

Each parser turns the text typed on the command line (or stored in a manifest)
into a validated value and raises `DomainError` on anything else, so the CLI can
report every malformed value with exit code 1.

Attributes
----------
FREQUENCY_ALIASES : dict
    Named frequencies, loaded from `config.translations`.

Functions
---------
parse_alpha(text)
    Decimal frequency or alias.
parse_window(text)
    ``radius`` or ``n_min:n_max``.
parse_int_list(text)
    ``start:stop:step`` (stop inclusive) or a comma-separated list.
parse_pairs(text)
    ``k:l`` pairs separated by commas.

Raises
------
SystemExit
    If this file is executed as a standalone script.
"""


import math

from config.translations import FREQUENCY_ALIASES
from utils.errors import DomainError


def parse_alpha(text) -> float:
    """
    Frequency from a decimal or an alias.

    Examples
    --------
    >>> round(parse_alpha("golden"), 12)
    0.618033988749
    >>> parse_alpha("0.25")
    0.25
    """
    key = str(text).strip().lower()
    if key in FREQUENCY_ALIASES:
        return FREQUENCY_ALIASES[key]
    try:
        value = float(key)
    except ValueError as error:
        raise DomainError(f"alpha must be a decimal in (0, 1) or one of {sorted(FREQUENCY_ALIASES)}") from error
    if not (math.isfinite(value) and 0.0 < value < 1.0):
        raise DomainError(f"alpha must lie in (0, 1), got {value!r}")
    return value


def parse_window(text) -> tuple[int, int]:
    """
    ``"100"`` gives ``(-100, 100)``; ``"-50:80"`` gives ``(-50, 80)``.

    Raises
    ------
    DomainError
        If the window does not contain the origin.
    """
    text = str(text).strip()
    try:
        if ":" in text:
            lower, upper = (int(part) for part in text.split(":"))
        else:
            upper = int(text)
            lower = -upper
    except ValueError as error:
        raise DomainError(f"window must be 'radius' or 'n_min:n_max', got {text!r}") from error
    if not lower <= 0 <= upper:
        raise DomainError(f"window [{lower}, {upper}] must contain the origin")
    return lower, upper


def parse_int_list(text) -> list[int]:
    """
    Integer list from ``start:stop:step`` (inclusive) or ``a,b,c``.

    Examples
    --------
    >>> parse_int_list("10:30:5")
    [10, 15, 20, 25, 30]
    >>> parse_int_list("3, 1,2")
    [3, 1, 2]
    """
    text = str(text).strip()
    try:
        if ":" not in text:
            return [int(part) for part in text.split(",") if part.strip()]
        parts = [int(part) for part in text.split(":")]
    except (TypeError, ValueError) as error:
        raise DomainError(f"cannot parse integer list {text!r}") from error
    if len(parts) not in (2, 3):
        raise DomainError(f"cannot parse integer list {text!r}")
    start, stop, step = parts if len(parts) == 3 else (*parts, 1)
    if step <= 0:
        raise DomainError(f"step must be positive in {text!r}")
    return list(range(start, stop + 1, step))


def parse_pairs(text) -> list[tuple[int, int]]:
    """
    Site pairs from ``"k:l,k:l,..."``.

    Examples
    --------
    >>> parse_pairs("0:10, -5:5")
    [(0, 10), (-5, 5)]
    """
    pairs = []
    for chunk in str(text).split(","):
        if not chunk.strip():
            continue
        try:
            k, l = (int(part) for part in chunk.split(":"))
        except ValueError as error:
            raise DomainError(f"pair must be 'k:l', got {chunk.strip()!r}") from error
        pairs.append((k, l))
    return pairs


if __name__ == '__main__':
    raise SystemExit("Cannot run this file.")
