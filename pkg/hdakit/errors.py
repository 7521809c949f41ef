class HdaError(Exception):
    pass


class ObjectMismatch(HdaError):
    pass


class IndexOutOfRange(HdaError):
    pass


class ArityMismatch(HdaError):
    pass


class InvalidMap(HdaError):
    pass


class InvalidComplex(HdaError):

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations) if len(self.violations) > 0 else "invalid complex")


class EndpointMismatch(HdaError):
    pass


class ClassTooLarge(HdaError):

    def __init__(self, cap: int):
        self.cap = cap
        super().__init__("congruence class exceeds " + str(cap) + " paths")


class InvalidPath(HdaError):
    pass


class InterfaceMismatch(HdaError):
    pass


class NotInterval(HdaError):
    pass


class NotIsomorphic(HdaError):
    pass


class NotAnExecution(HdaError):
    pass


class LabelMismatch(HdaError):
    pass


class TheoremViolation(HdaError):

    def __init__(self, message: str, pair=None):
        self.pair = pair
        super().__init__(message)


class FormatError(HdaError):

    def __init__(self, message: str, line: int = None, column: int = None):
        self.line = line
        self.column = column
        if line is not None:
            message = message + " (line " + str(line) + (", column " + str(column) if column is not None else "") + ")"
        super().__init__(message)
