"""Exception hierarchy.

``source`` lists the evidence-file line numbers of the statements involved,
when known.
"""


class EvidenceError(Exception):
    """Invalid evidence, formula or knowledge-base usage."""

    def __init__(self, message, source=()):
        super().__init__(message)
        self.message = message
        self.source = tuple(s for s in source if s is not None)

    def __str__(self):
        if not self.source:
            return self.message
        lines = ", ".join(str(s) for s in self.source)
        return f"{self.message} (line {lines})" if len(self.source) == 1 else (
            f"{self.message} (lines {lines})"
        )


class FormulaSyntaxError(EvidenceError):
    def __init__(self, message, line=None, column=None):
        super().__init__(message, (line,))
        self.line = line
        self.column = column

    def __str__(self):
        where = []
        if self.line is not None:
            where.append(f"line {self.line}")
        if self.column is not None:
            where.append(f"column {self.column}")
        return f"{', '.join(where)}: {self.message}" if where else self.message


class PolynomialityError(EvidenceError):
    """A condition is used by more conditional trials than it was observed true."""


class ContradictionError(EvidenceError):
    """Positive evidence for an event that the axioms make impossible."""


class InfeasibleError(EvidenceError):
    """No joint distribution satisfies the axioms and interval constraints."""


class UnboundedError(Exception):
    pass
