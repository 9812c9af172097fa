"""Exception types shared across the package."""

from __future__ import annotations


class StructureError(ValueError):
    """Structure-constant data violates a structural invariant (shape, antisymmetry, frame)."""


class JacobiError(ValueError):
    """Structure constants fail the Jacobi identity beyond tolerance."""

    def __init__(self, residuals: tuple[float, float, float], tol: float):
        self.residuals = residuals
        self.tol = tol
        r1, r2, r3 = residuals
        super().__init__(
            f"Jacobi identity violated: residuals ({r1:.3e}, {r2:.3e}, {r3:.3e}) exceed {tol:.3e}"
        )


class IntegrabilityError(ValueError):
    """The almost complex structure of a real presentation is not integrable."""


class ConstraintError(ValueError):
    """Family parameters violate the quadratic compatibility constraints."""

    def __init__(self, residuals: tuple[float, float], tol: float):
        self.residuals = residuals
        self.tol = tol
        super().__init__(
            f"parameter constraints violated: residuals ({residuals[0]:.3e}, {residuals[1]:.3e}) "
            f"exceed {tol:.3e}"
        )


class FrameError(ValueError):
    """A frame change matrix is not unitary, or a frame convention is not met."""


class ParseError(ValueError):
    """An instance file cannot be parsed; ``location`` points into the document."""

    def __init__(self, message: str, location: str = "$"):
        self.location = location
        super().__init__(f"{location}: {message}")
