class ProfsimError(Exception):
    """Base class for all errors raised by profsim."""


class SchemaError(ProfsimError):
    """An attribute value or schema entry violates its declared kind."""


class GraphError(ProfsimError):
    """A graph references a profile that does not exist, or is otherwise malformed."""


class WeightingError(ProfsimError):
    """A weight formula is undefined for the given inputs."""


class ParseError(ProfsimError):
    """An input document is malformed.

    ``problems`` holds every ``(line, message)`` found; the exception message
    is the first of them.
    """

    def __init__(self, problems):
        self.problems = list(problems)
        line, message = self.problems[0]
        self.line = line
        super().__init__(format_problem(line, message))


def format_problem(line, message):
    return f"line {line}: {message}" if line is not None else message
