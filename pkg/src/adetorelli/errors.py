"""Exception hierarchy shared by the library and the CLI exit-code mapping."""


class AdeTorelliError(Exception):
    pass


class InputError(AdeTorelliError, ValueError):
    """Malformed or invalid user input (exit code 1)."""


class ConsistencyError(AdeTorelliError):
    """Computed data contradicts a structural identity (exit code 3)."""


class IncompleteSingularLocusError(ConsistencyError):
    def __init__(self, msg="undeclared or non-isolated singularities suspected"):
        super().__init__(msg)


class DualityViolation(ConsistencyError):
    pass


class LemmaViolation(ConsistencyError):
    pass


class BudgetExceeded(AdeTorelliError):
    """A monomial basis would exceed the column budget (exit code 4)."""


class UnsupportedParity(InputError):
    pass


class NonVersalError(AdeTorelliError):
    def __init__(self, msg="non-versal family; codimension formula not guaranteed"):
        super().__init__(msg)


class DomainError(AdeTorelliError, ValueError):
    pass
