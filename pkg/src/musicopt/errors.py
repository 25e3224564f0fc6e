"""Exceptions and guards shared across the package."""

from __future__ import annotations

# Iterates past this norm are treated as diverged rather than left to overflow.
NORM_GUARD = 1e12


class DivergenceError(RuntimeError):
    """An iterate became non-finite or exceeded the norm guard.

    Parameters
    ----------
    iteration : int
        Iteration count at which the offending iterate appeared.
    norm : float, optional
        Norm of the offending iterate, if it was finite.
    """

    def __init__(self, iteration: int, norm: float | None = None):
        self.iteration = iteration
        self.norm = norm
        detail = f"norm {norm:.3e}" if norm is not None else "non-finite values"
        super().__init__(f"iterates diverged at iteration {iteration} ({detail})")


class ConfigError(ValueError):
    """A configuration document failed validation.

    Carries the full list of problems so callers can report them all at once.
    """

    def __init__(self, problems: list[str]):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))
