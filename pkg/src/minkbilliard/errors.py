"""Exception types shared across the package."""


class GeometryError(Exception):
    """Base class for geometric failures."""


class DimensionMismatch(GeometryError):
    pass


class InvalidBody(GeometryError):
    """Vertex and facet representations disagree, or the origin is not interior."""


class NonClassical(GeometryError):
    """A point landed on a face of codimension >= 2 (vertex/edge hit).

    Carries ``bounce`` when raised mid-simulation.
    """

    def __init__(self, message, bounce=None):
        super().__init__(message)
        self.bounce = bounce


class Degenerate(GeometryError):
    """A reflection or advance ray has no positive crossing."""


class NotClosed(GeometryError):
    """Simulation budget exhausted before the phase point returned to the start.

    The partial trajectory is attached as ``record``.
    """

    def __init__(self, message, record=None):
        super().__init__(message)
        self.record = record


class ProjectionMismatch(GeometryError):
    """A composed trajectory failed its projection checks."""
