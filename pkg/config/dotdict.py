"""
DotDict: a dictionary subclass with attribute-style access.

The tolerance and default bundles in `config.config` are `DotDict` instances so
call sites can write ``TOLERANCES.chain_slack`` instead of
``TOLERANCES["chain_slack"]``. Missing keys read as `None`, like `dict.get`.

Examples
--------
>>> d = DotDict({"lam": 2.0, "seed": 7})
>>> d.lam
2.0
>>> d.window is None
True

Raises
------
SystemExit
    If this file is executed as a standalone script.
"""


class DotDict(dict):
    """A dictionary subclass that supports attribute-style access."""

    __getattr__ = dict.get
    __setattr__ = dict.__setitem__
    __delattr__ = dict.__delitem__


if __name__ == '__main__':
    raise SystemExit("Cannot run this file.")
