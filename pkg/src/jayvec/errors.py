"""Exception hierarchy shared by the geometry and PDE modules."""


class JayvecError(ValueError):
    """Base class for all input/contract violations raised by jayvec."""


class DegeneratePairError(JayvecError):
    """Two semi-diameter vectors are parallel (or zero)."""


class IsotropicError(JayvecError):
    """A jay-vector has no principal-axes decomposition."""


class SingularTriadError(JayvecError):
    """A vector triad is linearly dependent or badly conditioned."""

    def __init__(self, message, delta=None):
        super().__init__(message)
        self.delta = delta


class DefinitenessError(JayvecError):
    """A matrix does not have the required eigenvalue signs."""

    def __init__(self, message, eigenvalues=None):
        super().__init__(message)
        self.eigenvalues = eigenvalues


class SignatureError(DefinitenessError):
    """A quadric matrix has the wrong signature for the requested surface."""


class OrthogonalityError(JayvecError):
    """A matrix fails its (pseudo-)orthogonality or determinant condition."""


class FrameError(JayvecError):
    """A section frame is not an orthonormal pair."""


class ClassError(JayvecError):
    """An operator or section has the wrong class for the requested operation."""


class InvariantViolation(JayvecError):
    """An internal consistency condition that must always hold was broken."""


class ConstructionError(JayvecError):
    """Solution vectors fail the conditions of their solution family."""

    def __init__(self, message, condition=None, residual=None):
        super().__init__(message)
        self.condition = condition
        self.residual = residual
