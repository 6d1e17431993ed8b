"""Exception types raised by heisgeo."""


class HeisgeoError(Exception):
    """Base class for all library errors."""


class InvalidArgument(HeisgeoError, ValueError):
    """A precondition on an argument was violated."""


class CharacteristicPointError(HeisgeoError, ValueError):
    """The horizontal gradient of the defining function vanishes (or nearly so)."""

    def __init__(self, point, grad_norm, tol=None):
        self.point = point
        self.grad_norm = float(grad_norm)
        self.tol = tol
        msg = f"characteristic point {tuple(point)}: |grad_H g| = {self.grad_norm:.3e}"
        if tol is not None:
            msg += f" <= {tol:.1e}"
        super().__init__(msg)


class VerticalTangentError(HeisgeoError, ValueError):
    """d/dt of the defining function vanishes where a formula divides by it."""


class SingularConfigurationError(HeisgeoError, ValueError):
    """A closed form is evaluated at one of its singular parameter values."""
