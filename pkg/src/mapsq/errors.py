"""Exception hierarchy shared by the engine and the command line."""


class MapsqError(Exception):
    """Base class for every error raised by this package."""


class NTriplesParseError(MapsqError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


class QuerySyntaxError(MapsqError):
    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"syntax error at line {line}, column {column}: {message}")
        self.line = line
        self.column = column
        self.message = message


class QuerySemanticError(MapsqError):
    pass


class ContractError(MapsqError, ValueError):
    """An operation was called with inputs violating its precondition."""


class UnknownTermId(MapsqError, KeyError):
    pass


class BudgetExceeded(MapsqError):
    pass
