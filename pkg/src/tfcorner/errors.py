"""Exception types shared across the solver modules."""


class SolverError(RuntimeError):
    """Newton or flow iteration failed to converge; message carries diagnostics."""


class StagnationError(SolverError):
    """Gradient-flow step size collapsed without meeting the stopping test."""


class TruncationError(RuntimeError):
    """Computational domain too short for the requested tail accuracy."""


class TopologyError(ValueError):
    """Level set is not a single simple closed curve (e.g. annular domain)."""


class ParameterError(ValueError):
    """Inconsistent solver/build parameters."""
