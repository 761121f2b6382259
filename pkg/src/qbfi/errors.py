class QbfiError(Exception):
    """Base error carrying a stable machine-readable ``code``."""

    def __init__(self, code, message=""):
        super().__init__(f"{code}: {message}" if message else code)
        self.code = code
        self.message = message


class FormatError(QbfiError):
    """Malformed QDIMACS, trace or netlist input."""

    def __init__(self, code, message="", line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(code, message)
        self.line = line


class RuleViolation(QbfiError):
    """A proof step does not follow the rules of its calculus."""

    def __init__(self, code, message="", step=None):
        super().__init__(code, message)
        self.step = step


class InvariantError(QbfiError):
    """An internal construction invariant failed.  Always a bug."""

    def __init__(self, step, message):
        super().__init__("INTERNAL_INVARIANT", f"step {step}: {message}")
        self.step = step
