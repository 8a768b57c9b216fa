"""Exception types shared across the toolkit."""


class ToolkitError(Exception):
    """Base class for every error raised by sdcalc."""


# -- diagram construction / validation -------------------------------------

class TypeMismatch(ToolkitError):
    """Two composed diagrams disagree on their wire words."""

    def __init__(self, position, expected, found):
        self.position = position
        self.expected = expected
        self.found = found
        super().__init__(
            f"type mismatch at {position}: expected {expected}, found {found}")


class ClassicalOnly(ToolkitError):
    """Copy/delete requested on a quantum wire."""

    def __init__(self, position):
        self.position = position
        super().__init__(f"{position} is only defined for classical wires")


class ShapeError(ToolkitError):
    """A matrix payload does not match the declared wire dimensions."""


# -- evaluation -------------------------------------------------------------

class DiscardAtPureLevel(ToolkitError):
    """A diagram containing a discard was evaluated as a pure tensor.

    Such diagrams only have a meaning after doubling into a channel.
    """


class MissingPayload(ToolkitError):
    """A generator without a concrete matrix cannot be evaluated."""

    def __init__(self, name):
        self.name = name
        super().__init__(f"generator {name!r} has no payload matrix")


# -- linear-algebra contracts ------------------------------------------------

class DimMismatch(ToolkitError):
    """Operands have incompatible dimensions."""


class NotUnitary(ToolkitError):
    """A matrix required to be unitary is not, within tolerance."""


class NotNormalized(ToolkitError):
    """A state vector is not normalized within tolerance."""


class NotAState(ToolkitError):
    """A matrix is not a valid density matrix."""


class InvalidDistribution(ToolkitError):
    """Probabilities are negative or do not sum to one."""


class NotAResolution(ToolkitError):
    """Projectors are not an orthogonal resolution of the identity."""


class NotBistochastic(ToolkitError):
    """A channel required to be trace-preserving and unital is not."""


class NotPM1Observable(ToolkitError):
    """An observable does not have eigenvalues +/-1 within tolerance."""


class BlockSpecViolation(ToolkitError):
    """A block-form specification breaks one of its invariants."""


# -- scattering --------------------------------------------------------------

class TooManyWires(ToolkitError):
    """The partition lattice is only enumerated for small wire counts."""


class WireWordMismatch(ToolkitError):
    """Cluster terms do not share a common wire word."""


# -- DSL ----------------------------------------------------------------------

class DslSyntaxError(ToolkitError):
    """A syntax error in a diagram program, with source position."""

    def __init__(self, line, col, expected):
        self.line = line
        self.col = col
        self.expected = expected
        super().__init__(f"line {line}, column {col}: expected {expected}")


class UndefinedName(ToolkitError):
    """A program refers to a name that was never declared."""

    def __init__(self, name, line=None):
        self.name = name
        self.line = line
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"undefined name {name!r}{where}")


class DuplicateName(ToolkitError):
    """A program declares the same name twice."""

    def __init__(self, name, line=None):
        self.name = name
        self.line = line
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"name {name!r} is already defined{where}")
