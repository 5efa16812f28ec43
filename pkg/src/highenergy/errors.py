"""Exception types shared by the package."""


class HighEnergyError(Exception):
    """Base class for all package errors."""


class InvalidInput(HighEnergyError, ValueError):
    """An argument violates a documented precondition."""


class QuadratureError(HighEnergyError):
    """A quadrature did not converge.

    Attributes:
        partial: the value accumulated before giving up.
        block: the last interval (or block) that was being integrated.
    """

    def __init__(self, message, partial=float("nan"), block=(float("nan"), float("nan"))):
        super().__init__(f"{message} (partial={partial!r}, block={block!r})")
        self.partial = partial
        self.block = block


class BracketError(HighEnergyError):
    """A monotone search escaped its bracket."""


class BoundedInput(HighEnergyError):
    """The sublevel-mass profile vanishes at a finite level, so no witness is needed."""


class NotInOrliczSpace(HighEnergyError):
    """Every sampled family member has infinite Luxembourg norm."""
