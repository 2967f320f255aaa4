"""Painleve-II corner-layer profiles and Gross-Pitaevskii ground states in
the Thomas-Fermi limit: solvers, matched asymptotics, and the verification
harness."""

from . import cli, errors, gpsolve, layers, painleve, specfun, trap, verify

__all__ = ["cli", "errors", "gpsolve", "layers", "painleve", "specfun", "trap", "verify"]
__version__ = "0.1.0"
