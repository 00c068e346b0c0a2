"""Exceptions raised by the simulation, scenario loading and metrics."""


class TerminalSimError(Exception):
    """Base class for all errors raised by terminalsim."""

    pass


class ScenarioError(TerminalSimError, ValueError):
    """Raised when scenario documents or their cross references are invalid.

    The message names the offending id (and line, for document errors) so
    the command line can report it without a traceback.
    """

    pass


class EnvironmentDocumentError(ScenarioError):
    """Raised when an environment document is malformed or inconsistent."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class NetworkDocumentError(ScenarioError):
    """Raised when a meso network document cannot be parsed."""

    pass


class UnknownTargetError(TerminalSimError, KeyError):
    """Raised when a target id is not defined in an environment."""

    def __init__(self, target_id: str, env_id: str):
        self.target_id = target_id
        self.env_id = env_id
        super().__init__(f"Unknown target {target_id!r} in environment {env_id!r}")

    def __str__(self) -> str:
        return str(self.args[0])


class UnreachableDestinationError(TerminalSimError):
    """Raised when no path connects an origin to a destination."""

    def __init__(self, origin: str, destination: str):
        self.origin = origin
        self.destination = destination
        super().__init__(f"No path from {origin!r} to {destination!r}")


class PlanCorruptError(TerminalSimError):
    """Raised when an agent's plan has no continuation at a node."""

    pass


class MissingCycleTagError(TerminalSimError):
    """Raised when a landing-cycle report finds no `<cycle>:<phase>` groups."""

    pass
