"""Exception types shared across the package.

Every error raised by library code derives from :class:`ConsensusToolError`,
so callers (and the CLI) can catch one base class.  Errors that point at a
specific edge or schedule entry carry the offending indices as attributes;
indices are 0-based internally, and the config layer translates them back to
the 1-based ids used in scenario files.
"""

from __future__ import annotations


class ConsensusToolError(Exception):
    """Base class for all package-specific errors."""


class NonSymmetricError(ConsensusToolError):
    """A matrix expected to be symmetric is not, beyond tolerance."""


class IndefiniteWeightError(ConsensusToolError):
    """An edge weight has both significantly positive and negative eigenvalues."""

    def __init__(self, message: str, i: int | None = None, j: int | None = None):
        super().__init__(message)
        self.i = i
        self.j = j


class ZeroWeightError(ConsensusToolError):
    """An edge carries a numerically zero weight matrix."""

    def __init__(self, message: str, i: int | None = None, j: int | None = None):
        super().__init__(message)
        self.i = i
        self.j = j


class SelfLoopError(ConsensusToolError):
    """An edge connects a node to itself."""


class NotPSDError(ConsensusToolError):
    """A matrix required to be positive semidefinite has a negative eigenvalue."""


class DimensionMismatchError(ConsensusToolError):
    """Array or graph dimensions are inconsistent."""


class DwellTooShortError(ConsensusToolError):
    """A schedule segment dwells for less than the declared minimum alpha."""

    def __init__(self, message: str, segment: int | None = None):
        super().__init__(message)
        self.segment = segment


class EmptyScheduleError(ConsensusToolError):
    """A schedule contains no segments or an empty graph catalog."""


class EmptyWindowError(ConsensusToolError):
    """A window selects no schedule segments."""


class SignInconsistentEdgeError(ConsensusToolError):
    """An edge appears with opposite weight signs inside one averaging window."""

    def __init__(self, message: str, i: int | None = None, j: int | None = None):
        super().__init__(message)
        self.i = i
        self.j = j


class WindowsNotContiguousError(ConsensusToolError):
    """Certification windows do not tile the schedule prefix back to back."""


class NonOrthonormalPsiError(ConsensusToolError):
    """The per-agent basis passed to the bipartite steady-state map is not orthonormal."""


class ScheduleExhaustedError(ConsensusToolError):
    """Simulation horizon extends beyond the final schedule segment."""


class HorizonError(ConsensusToolError):
    """Simulation horizon or sampling step is not strictly positive."""


class ConfigError(ConsensusToolError):
    """Base class for scenario-file problems."""


class ConfigParseError(ConfigError):
    """Scenario file is not valid JSON."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message)
        self.line = line


class ConfigValidationError(ConfigError):
    """Scenario file parsed but a field is missing, mistyped, or inconsistent."""

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message)
        self.field = field
