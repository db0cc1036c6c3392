"""Exception types shared across the package."""

from __future__ import annotations

__all__ = ["SpecFormatError", "SimulationDivergence"]


class SpecFormatError(ValueError):
    """A design-spec document could not be parsed.

    Raised for both JSON syntax errors (``where`` reports line/column) and
    schema violations (``where`` reports the offending field path).
    """

    def __init__(self, message: str, where: str | None = None):
        self.where = where
        super().__init__(f"{where}: {message}" if where else message)


class SimulationDivergence(RuntimeError):
    """A simulated cycle failed to converge (e.g. a setpoint never reached)."""

    def __init__(self, message: str, cycle: int):
        self.cycle = cycle
        super().__init__(f"cycle {cycle}: {message}")
