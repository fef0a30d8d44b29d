"""
Exception types raised by the planning services.
The CLI maps every CorridorTiltError to exit status 1.
"""
from typing import Optional


class CorridorTiltError(Exception):
    """Base class for all expected failures"""


class DegenerateGeometry(CorridorTiltError):
    """User location coincides with the antenna in 3D (log singularity in the pathloss)"""


class EmptyRegion(CorridorTiltError):
    """A region that must carry mass produced no quadrature points"""


class InvalidMixture(CorridorTiltError):
    """Mixture ratio asks for a population that has no region"""


class EmptyPopulation(CorridorTiltError):
    """Selected population has zero mass"""


class DimensionMismatch(CorridorTiltError):
    """Tilt table does not match the station list"""


class ConfigParseError(CorridorTiltError):
    """Scenario text could not be parsed"""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None, field: Optional[str] = None):
        self.line = line
        self.column = column
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        if field:
            where.append(f"field '{field}'")
        suffix = f" ({', '.join(where)})" if where else ""
        super().__init__(f"{message}{suffix}")


class ConfigValidationError(CorridorTiltError):
    """Scenario parsed but violates an invariant; `field` names it"""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")
