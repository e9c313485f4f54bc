"""Exception hierarchy shared across the package."""


class ExpandLabError(Exception):
    pass


class PolySyntaxError(ExpandLabError, ValueError):
    def __init__(self, message: str, offset: int, text: str = ""):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset
        self.text = text


class UnknownVariableError(ExpandLabError, ValueError):
    pass


class ArityError(ExpandLabError, ValueError):
    pass


class DegenerateInputError(ExpandLabError, ValueError):
    """Input lacks the dependence an operation presupposes."""


class KindMismatchError(ExpandLabError, TypeError):
    pass


class BudgetExceededError(ExpandLabError, RuntimeError):
    pass


class InvariantViolation(ExpandLabError, AssertionError):
    """A recomputed certificate disagreed with the search that produced it."""


class ConfigError(ExpandLabError, ValueError):
    def __init__(self, errors):
        if isinstance(errors, str):
            errors = [errors]
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))
