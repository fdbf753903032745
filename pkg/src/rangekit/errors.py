"""Exception types shared across the package.

Everything derives from :class:`RangeKitError` so the CLI can map domain
failures to exit code 1 with one ``except`` clause.
"""


class RangeKitError(Exception):
    pass


class InputError(RangeKitError, ValueError):
    """Malformed input file or argument."""


# aggregation algebra
class NotInvertible(RangeKitError, TypeError):
    pass


# range trees
class EmptyPointSet(RangeKitError, ValueError):
    pass


class UnknownPoint(RangeKitError, KeyError):
    pass


class UnsupportedCombination(RangeKitError, ValueError):
    pass


class InvalidBox(RangeKitError, ValueError):
    pass


# prefix cubes
class ZeroInProductCube(RangeKitError, ValueError):
    pass


class ZeroUpdateInProductMode(RangeKitError, ValueError):
    pass


# rooted trees
class TreeError(RangeKitError, ValueError):
    pass


class CycleDetected(TreeError):
    pass


class DisconnectedVertex(TreeError):
    pass


class UnknownVertex(RangeKitError, KeyError):
    pass


# selection
class RankOutOfRange(RangeKitError, IndexError):
    pass


class BadSubrange(RangeKitError, ValueError):
    pass


# median
class EmptyInput(RangeKitError, ValueError):
    pass


class ZeroTotalWeight(RangeKitError, ValueError):
    pass


class NegativeWeight(RangeKitError, ValueError):
    pass


class EmptyRange(RangeKitError, ValueError):
    pass


# sequence editor
class PositionOutOfRange(RangeKitError, IndexError):
    pass


class BadPasteTarget(RangeKitError, ValueError):
    pass


# rotating stack
class CapacityExceeded(RangeKitError, OverflowError):
    pass


# sweep selection
class NoCrossover(RangeKitError, ValueError):
    pass


class RankExceedsEligible(RangeKitError, IndexError):
    def __init__(self, query_index: int, k: int, eligible: int):
        super().__init__(f"query {query_index}: rank {k} exceeds {eligible} eligible points")
        self.query_index = query_index
        self.k = k
        self.eligible = eligible


# cli / bench
class CapExceeded(RangeKitError, ValueError):
    pass
