"""Exception types shared across the package."""


class CspathError(Exception):
    """Base class for package errors."""


class FormatError(CspathError, ValueError):
    """Malformed instance file, config file or CLI value."""


class EdgeCapError(CspathError, ValueError):
    """Materialization request exceeds the configured edge cap."""


class FrontierCapError(CspathError, RuntimeError):
    """Label-setting exceeded the configured total-label cap."""

    def __init__(self, node: int, cap: int):
        super().__init__(f"frontier label cap {cap} exceeded at node {node}")
        self.node = node
        self.cap = cap


class DisconnectedError(CspathError, RuntimeError):
    """No finite-weight path between the terminals."""
