"""Exception hierarchy shared by all planconnect modules."""


class PlanConnectError(Exception):
    """Base class for all planconnect errors."""


class MalformedImage(PlanConnectError):
    """Image file has a bad magic number, header, or payload size."""


class IoFailure(PlanConnectError):
    """A read or write to the filesystem failed."""


class NoFreeCells(PlanConnectError):
    """Operation requires at least one FREE cell."""


class BlockedCell(PlanConnectError):
    """Queried cell is BLOCKED."""


class OutOfBounds(PlanConnectError):
    """Cell index outside the grid."""


class UnreachableCells(PlanConnectError):
    """Grid was not pruned to a single component; some pairs are unreachable."""


class DisconnectedVisibilityGraph(PlanConnectError):
    """Visibility graph is not connected; mean depth is undefined."""


class InfeasibleParams(PlanConnectError):
    """Plan generation could not satisfy its constraints within the retry budget."""

    def __init__(self, message: str, attempts: int = 0):
        super().__init__(message)
        self.attempts = attempts


class EmptyField(PlanConnectError):
    """Analysis field has no defined values."""


class DuplicateIds(PlanConnectError):
    """Record id list contains duplicates."""


class EmptyTaskList(PlanConnectError):
    """Stats requested over zero completed tasks."""


class ManifestIo(PlanConnectError):
    """Task manifest could not be read or parsed."""


class BindFailure(PlanConnectError):
    """Coordinator could not bind its listening address."""
