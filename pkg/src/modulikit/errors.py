"""Exception types shared across the toolkit."""


class ModuliKitError(Exception):
    """Base class for every error raised by modulikit."""


class InvalidGraph(ModuliKitError):
    pass


class UnknownId(ModuliKitError):
    pass


class SelfGlueSamePoint(ModuliKitError):
    pass


class Undefined(ModuliKitError):
    """Raised when a construction degenerates to a point."""


class OutOfRange(ModuliKitError):
    pass


class NotStable(ModuliKitError):
    pass


class NotClosed(ModuliKitError):
    pass


class DimensionMismatch(ModuliKitError):
    pass


class TooLarge(ModuliKitError):
    pass


class UnknownSubgroup(ModuliKitError):
    pass


class UnknownIdentity(ModuliKitError):
    pass


class MissingSideData(ModuliKitError):
    pass
