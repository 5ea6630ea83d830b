"""Exception hierarchy shared across the solver suite.

Each class maps onto one CLI exit code: configuration problems exit 1,
numerical blow-ups exit 2, and analyses that cannot produce a required
wave classification exit 3.
"""

from __future__ import annotations

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_BLOWUP = 2
EXIT_UNRESOLVED = 3


class ConfigurationError(ValueError):
    """Invalid grid/model/scheme configuration detected before time stepping."""

    exit_code = EXIT_CONFIG


class DomainError(ValueError):
    """An evaluation was requested outside a function's mathematical domain."""

    exit_code = EXIT_CONFIG


class DegenerateShockError(ValueError):
    """Shock-speed evaluation with equal left and right states."""

    exit_code = EXIT_CONFIG


class NumericalBlowupError(RuntimeError):
    """Non-finite values appeared during time integration."""

    exit_code = EXIT_BLOWUP

    def __init__(self, message: str, time: float | None = None,
                 step: int | None = None, stage: int | None = None):
        super().__init__(message)
        self.time = time
        self.step = step
        self.stage = stage


class PositivityError(NumericalBlowupError):
    """A field that must stay positive dropped to or below its floor."""


class UnresolvedWaveError(RuntimeError):
    """Wave structure could not be classified to the requested certainty."""

    exit_code = EXIT_UNRESOLVED
