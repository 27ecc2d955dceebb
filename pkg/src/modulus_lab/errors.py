"""Exception types shared across the package."""


class ModulusLabError(Exception):
    """Base class for all package errors."""


class IntegrabilityError(ModulusLabError):
    """Weighted norm requested for a non-integrable weight/function pair."""


class SingularityError(ModulusLabError):
    """A function evaluation returned a non-finite value inside the clip band."""


class DegenerateNodesError(ModulusLabError):
    """Divided-difference nodes coincide (within tolerance)."""


class DerivativeUnavailableError(ModulusLabError):
    """Numeric differentiation failed to converge and no exact rule exists."""


class DegenerateError(ModulusLabError):
    """An intermediate quantity left its valid range (e.g. vanishing radicand)."""


class UnknownEntryError(ModulusLabError):
    """Requested catalog entry does not exist."""


class ParamRangeError(ModulusLabError):
    """Catalog entry parameters outside their validity range."""


class SolverStallError(ModulusLabError):
    """An iterative solver (exchange / IRLS / simplex) failed to make progress."""


class DivisionError(ModulusLabError):
    """A ratio could not be formed because the denominator underflowed."""


class SpecError(ModulusLabError):
    """Invalid (k, q, p) or delta combination for a rate formula."""


class DegenerateFitError(ModulusLabError):
    """Rate-fit design matrix is rank deficient or data unusable."""
