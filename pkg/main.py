"""
Project Name: amo-lab, a numerical lab for dynamical localization of the almost Mathieu operator

Overview
--------
The almost Mathieu operator ``(Hu)(n) = u(n+1) + u(n-1) + 2λ cos(2π(nα + θ)) u(n)``
localizes exponentially for coupling λ > 1 and Diophantine α. This project realizes,
on finite Dirichlet truncations, every computable object of an exponential dynamical
localization argument for that operator and checks each of them numerically.

Key Features
------------
- **Arithmetic**: continued fractions, Diophantine checks, the β(α) proxy and η-resonances of a phase.
- **Eigenanalysis**: an implicit QL eigensolver (LAPACK optional), localization centers and center mass profiles.
- **Dynamics**: the propagator ``exp(-itH)`` through the spectral decomposition and certified sup bounds.
- **Expectation**: phase averages, the decay rate γ of the averaged overlap, and the closed-form summation bound on it.
- **Verification**: an invariant suite that exits with status 3 when an exact property fails.

Project Structure
-----------------
- `config/`: Constants, tolerances, defaults, JSON schemas, logging and profiling.
- `scripts/`: The lab itself (arithmetic, hamiltonian, eigensolve, localization, dynamics, expectation,
  evaluation) and the click command group.
- `tests/`: Unit tests and independent oracles.
- `utils/`: CSV/JSON persistence, command-line parsers and the exception hierarchy.

Usage
-----
$ python main.py spectrum --window 200 --lambda 2
$ python main.py gamma --window 200 --phases 200 --backend lapack --out results/
$ python main.py resonances --theta 0.3 --eta 0.5 -K 100
$ python main.py verify
$ python main.py --config results/gamma_manifest.json gamma --out replay/

Dependencies
------------
- Python 3.10 or above
- Required packages listed in `requirements.txt` or `environment.yml`
"""


from scripts.cli import run


__docformat__ = "numpy en"


if __name__ == '__main__':
    raise SystemExit(run())
