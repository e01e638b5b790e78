"""Exception hierarchy shared across the toolkit.

The CLI maps these onto process exit codes: InputError -> 2,
InfeasibleError -> 3, CapacityError -> 4.
"""


class HexrouteError(Exception):
    """Base class for all toolkit errors."""


class InputError(HexrouteError):
    """Malformed or inconsistent user input (charts, requests, configs)."""


class ChartError(InputError):
    """Obstacle chart fails validation."""


class InvalidRequestError(InputError):
    """A planning request references unusable endpoints or parameters."""


class InfeasibleError(HexrouteError):
    """No feasible route or tour exists for the given inputs."""


class CapacityError(HexrouteError):
    """A configured resource budget (cells, enumeration size) was exceeded."""
