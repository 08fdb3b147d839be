"""
Exception hierarchy for the separating-algebra toolkit.
Every error a computation can raise derives from SepAlgError so the scenario
runner can turn it into an error result without stopping the whole run.
"""


class SepAlgError(Exception):
    """Base class for all toolkit errors."""


# --- FIELDS ---
class CompositeCharacteristicError(SepAlgError):
    pass


class SizeCapError(SepAlgError):
    pass


class NoSuchRootError(SepAlgError):
    pass


class IncompatibleFieldsError(SepAlgError):
    pass


# --- POLYNOMIALS ---
class PolySyntaxError(SepAlgError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.reason = message
        self.position = position


class UnknownVariableError(SepAlgError):
    def __init__(self, name: str, position: int = -1):
        super().__init__(f"unknown variable '{name}'" + (f" at position {position}" if position >= 0 else ""))
        self.name = name
        self.position = position


class CharZeroUnsupportedError(SepAlgError):
    pass


class DimensionMismatchError(SepAlgError):
    pass


# --- IDEALS ---
class DegreeCapExceeded(SepAlgError):
    """Raised when Buchberger would pass the degree cap. The partial basis is kept
    for inspection only; it must never back a correctness claim."""

    def __init__(self, cap: int, reached: int, partial=None):
        super().__init__(f"degree cap {cap} exceeded (pair of degree {reached})")
        self.cap = cap
        self.reached = reached
        self.partial = partial or []


class OrderMismatchError(SepAlgError):
    pass


class ZeroDivisorQueryError(SepAlgError):
    pass


class UnitIdealError(SepAlgError):
    pass


# --- GROUPS ---
class CapExceeded(SepAlgError):
    pass


class SingularGeneratorError(SepAlgError):
    pass


class NotNormalError(SepAlgError):
    pass


class QuotientNotElementaryAbelianError(SepAlgError):
    pass


class SigmaInNError(SepAlgError):
    pass


class NotSubgroupError(SepAlgError):
    pass


# --- INVARIANTS / COHOMOLOGY ---
class NotInvariantError(SepAlgError):
    def __init__(self, poly):
        super().__init__(f"not invariant: {poly}")
        self.poly = poly


class InvalidCocycleError(SepAlgError):
    pass


class TrivialClassError(SepAlgError):
    pass


# --- SUBALGEBRAS / CERTIFICATES ---
class NotHomogeneousError(SepAlgError):
    pass


class NotHsopError(SepAlgError):
    pass


class GenerationFailureError(SepAlgError):
    def __init__(self, product):
        super().__init__(f"product {product} is not in the span of the module generators")
        self.product = product


class NontrivialityNotCertifiedError(SepAlgError):
    pass


class NotAnnihilatingError(SepAlgError):
    def __init__(self, index: int, element):
        super().__init__(f"element {index} ({element}) does not annihilate the class")
        self.index = index
        self.element = element


class NotPhsopError(SepAlgError):
    pass


class ConsistencyError(SepAlgError):
    """An internal cross-check failed (Burnside count, I_sep in J, ...)."""


# --- SCENARIOS ---
class ScenarioParseError(SepAlgError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        where = ""
        if line:
            where = f"line {line}, column {column}: " if column else f"line {line}: "
        super().__init__(f"{where}{message}")
        self.line = line
        self.column = column


class ScenarioTimeout(SepAlgError):
    pass
