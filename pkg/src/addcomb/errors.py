"""Exception hierarchy shared by all modules."""


class AddcombError(Exception):
    """Base class for all library errors."""


class LiteralError(AddcombError):
    """Malformed set literal (bad syntax, out-of-range modulus, duplicate element)."""


class EmptySetError(AddcombError):
    """Operation requires a nonempty set."""


class NonUnitDilationError(AddcombError):
    """Dilation factor is not a unit modulo n."""


class PrimeRequiredError(AddcombError):
    """Operation is only defined for prime modulus."""


class NotASubgroupError(AddcombError):
    """Requested subgroup order does not divide the modulus."""


class HypothesisNotMetError(AddcombError):
    """A doubling hypothesis required by the operation does not hold."""


class UndefinedDimensionError(AddcombError):
    """Additive dimension is undefined (singleton input)."""


class NotRectifiableError(AddcombError):
    """The residue set admits no sum-preserving embedding into the integers."""


class PreconditionFailedError(AddcombError):
    """A stated precondition failed; the message names which one."""


class NotFullDimensionalError(AddcombError):
    """Point set is contained in an affine hyperplane."""


class NotFreimanIsomorphismError(AddcombError):
    """The given pointwise map does not preserve pair-sum equalities."""


class InvalidParamsError(AddcombError):
    """Family parameters violate their invariants."""


class SearchRangeError(AddcombError):
    """Search parameters outside the supported (or budgeted) range."""


class UnknownSuiteError(AddcombError):
    """No verification suite with that name."""


class ConsistencyError(AddcombError):
    """Internal consistency failure: a result that would falsify a proven
    statement the implementation relies on.  Always indicates a bug."""
