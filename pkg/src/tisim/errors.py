"""Exception types shared across the package."""


class TisimError(Exception):
    """Base class for every error raised by this package."""


class ParseError(TisimError):
    """Scenario document is syntactically malformed."""


class ValidationError(TisimError):
    """A constructed object violates one of its invariants."""


class UnknownNode(TisimError):
    """Referenced node id does not exist."""


class UnknownVehicle(TisimError):
    """Referenced vehicle id does not exist."""


class UnknownSignal(TisimError):
    """Actuation addressed a signal head that does not exist."""


class EmptyPath(TisimError):
    """Concave aggregation over an empty element set."""


class PreconditionError(TisimError):
    """Operation called outside its stated preconditions."""


class NoRoute(TisimError):
    """Destination is unreachable from the source."""


class Infeasible(TisimError):
    """Routes exist but none satisfies all constraints."""


class UnstableQueue(TisimError):
    """Queue arrival rate at or above the service rate."""


class UnsupportedGeometry(TisimError):
    """Intersection layout outside the supported templates."""


class NoConnection(TisimError):
    """No connection joins the given port pair."""


class TooLarge(TisimError):
    """Instance exceeds the size bound of an exact algorithm."""


class PolicyMismatch(TisimError):
    """Control policy references objects unknown to the target fabric."""


class Overcrowded(TisimError):
    """Demand asks for more vehicles than the lattice can hold."""


class DecodeError(TisimError):
    """Base class for wire-format decode failures."""


class BadMagic(DecodeError):
    """Frame does not start with the expected magic bytes."""


class BadCrc(DecodeError):
    """Frame checksum mismatch."""


class UnknownVersion(DecodeError):
    """Frame version not supported by this decoder."""


class Truncated(DecodeError):
    """Frame shorter (or longer) than its header declares."""


class UnknownMessageType(DecodeError):
    """Frame type tag not recognized."""
