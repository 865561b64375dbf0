"""Exception hierarchy shared across the engine.

The command-line layer maps these onto process exit codes, so user-input
problems and internal cross-check failures must stay distinguishable.
"""

from __future__ import annotations


class EngineError(Exception):
    """Base class for all engine-specific errors."""


class InputError(EngineError):
    """Malformed or out-of-contract user input."""


class DegenerateTetradError(InputError):
    """A frame whose inner products violate the null-tetrad normalization."""


class InternalInconsistencyError(EngineError):
    """Two independent internal computation routes disagreed."""


class CausticError(EngineError):
    """A closed-form flow hit a singular matrix; carries the parameter value."""

    def __init__(self, v):
        super().__init__(f"singular matrix (caustic) at parameter {v}")
        self.v = v


class PatternError(InputError):
    """Coefficient data does not match the special pattern a flow requires."""
