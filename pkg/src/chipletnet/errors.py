"""Exception types shared across the package."""


class ChipletNetError(Exception):
    """Base class for errors raised by this package."""


class OverlappingPlacementsError(ChipletNetError):
    """Two chiplet rectangles overlap with positive area."""


class DisconnectedGraphError(ChipletNetError):
    """A graph metric was requested on a disconnected adjacency graph."""


class NotRegularError(ChipletNetError):
    """A closed-form metric was requested for a non-regular chiplet count."""


class TooLargeForExactError(ChipletNetError):
    """Exhaustive bisection was requested above the exact-search size limit."""


class NoLinkAreaError(ChipletNetError):
    """The requested power-bump fraction leaves no area for link bumps."""


class LinkInfeasibleError(ChipletNetError):
    """The link area cannot fit more than the non-data wires."""


class SaturatedError(ChipletNetError):
    """A simulation failed to drain all traffic within its cycle cap."""
