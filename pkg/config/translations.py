from math import sqrt


FREQUENCY_ALIASES: dict[str, float] = {
    "golden": (sqrt(5.0) - 1.0) / 2.0,
    "sqrt2": sqrt(2.0) - 1.0,
    "silver": sqrt(2.0) - 1.0,
}
"""
Named frequencies accepted wherever an alpha value is parsed.

Keys
----
str
    Lower-case alias as typed on the command line.
Values
------
float
    The frequency in (0, 1) the alias stands for.
"""


if __name__ == '__main__':
    raise SystemExit("Cannot run this file.")
