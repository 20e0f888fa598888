"""Exception types shared across the package."""


class GrammarError(ValueError):
    """Base class for malformed grammars."""


class GrammarSyntaxError(GrammarError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class UndefinedStartSymbol(GrammarError):
    pass


class SymbolCollision(GrammarError):
    pass


class EmptyLanguage(GrammarError):
    pass


class NotCnf(GrammarError):
    pass


class NotLinear(GrammarError):
    pass


class UnknownSymbol(ValueError):
    pass


class InputTooLong(ValueError):
    pass


class AmbiguityViolation(RuntimeError):
    """Two distinct paths were found between a pair of dependency-graph nodes."""


class BudgetExceeded(RuntimeError):
    pass


class NotAnOperator(ValueError):
    pass


class NotWellFormed(ValueError):
    pass


class FormulaSyntaxError(ValueError):
    pass


class NoStringOfThatLength(ValueError):
    def __init__(self, message, feasible=()):
        self.feasible = tuple(feasible)
        super().__init__(message)


class CannotFindNegative(RuntimeError):
    pass
