from cdiserrors import APIError


class ParameterError(APIError):
    """
    A precondition on sizes or parameters is violated.
    """

    def __init__(self, message):
        super(ParameterError, self).__init__(message)
        self.message = str(message)
        self.code = 400


class ParseError(APIError):
    """
    Malformed ensemble, hypergraph or global function file.
    """

    def __init__(self, message, path=None, line=None, column=None):
        location = ""
        if path is not None:
            location += "{}: ".format(path)
        if line is not None:
            location += "line {}".format(line)
            if column is not None:
                location += " column {}".format(column)
            location += ": "
        super(ParseError, self).__init__(location + str(message))
        self.message = location + str(message)
        self.path = path
        self.line = line
        self.column = column
        self.code = 400


class ExactInfeasibleError(APIError):
    """
    Exact evaluation was asked for an instance beyond the configured guard.
    """

    def __init__(self, message, alternative=None):
        if alternative:
            message = "{} (exact infeasible, use {} instead)".format(
                message, alternative
            )
        super(ExactInfeasibleError, self).__init__(message)
        self.message = str(message)
        self.code = 413


class StructuralError(APIError):
    """
    A construction cannot proceed on the given input.
    """

    def __init__(self, message):
        super(StructuralError, self).__init__(message)
        self.message = str(message)
        self.code = 422


class PropertyFailure(APIError):
    """
    A hard postcondition or an asserted property does not hold.
    """

    def __init__(self, message, report=None):
        super(PropertyFailure, self).__init__(message)
        self.message = str(message)
        self.report = report
        self.code = 500
