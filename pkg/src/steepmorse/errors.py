"""Exception hierarchy. Index fields are 1-based, as in the CHC format."""


class SteepMorseError(Exception):
    """Base class for every error raised by the package."""


class RingError(SteepMorseError, ValueError):
    pass


class FormatError(SteepMorseError, ValueError):
    """Malformed CHC / matching / facet input."""


class ComplexError(SteepMorseError):
    pass


class ShapeMismatch(ComplexError):
    def __init__(self, message, k=None):
        super().__init__(message)
        self.k = k


class NonzeroComposite(ComplexError):
    def __init__(self, k, u, w):
        super().__init__(f"d_{k - 1} d_{k} has nonzero entry at ({u}, {w})")
        self.k, self.u, self.w = k, u, w

    def __eq__(self, other):
        return isinstance(other, NonzeroComposite) and (self.k, self.u, self.w) == (
            other.k,
            other.u,
            other.w,
        )

    __hash__ = Exception.__hash__


class EmptyShape(SteepMorseError, ValueError):
    pass


class InvalidMatching(SteepMorseError):
    pass


class SharedVertex(InvalidMatching):
    def __init__(self, k, vertex):
        super().__init__(f"degree {k}: vertex {vertex} is used by two matched edges")
        self.k, self.vertex = k, vertex


class NonUnitWeight(InvalidMatching):
    def __init__(self, k, u, v, detail="weight is not a unit"):
        super().__init__(f"degree {k}: pair ({u}, {v}): {detail}")
        self.k, self.u, self.v = k, u, v


class MatchingCycle(InvalidMatching):
    def __init__(self, k, witness):
        super().__init__(f"degree {k}: matched graph has a directed cycle through {witness}")
        self.k, self.witness = k, witness


class ResidualTooLarge(SteepMorseError):
    def __init__(self, shape, threshold):
        super().__init__(
            f"residual boundary of shape {shape} exceeds the dense SNF bound {threshold}; "
            "raise snf_limit (CLI: --snf-limit) to proceed"
        )
        self.shape, self.threshold = shape, threshold


class TooLarge(SteepMorseError):
    pass


class JacobiViolation(SteepMorseError):
    pass
