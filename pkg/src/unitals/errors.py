"""Exception hierarchy shared by all modules."""


class UnitalsError(Exception):
    """Base class for all library errors."""


class MalformedInputError(UnitalsError):
    """Input is structurally broken (bad indices, unreadable rows).

    Distinct from an axiom violation: malformed data cannot even be
    checked against the plane axioms.
    """


class FormatError(MalformedInputError):
    """A plane or label file does not match any accepted format."""


class BaseLabelError(MalformedInputError):
    """Labels are inconsistent with the declared label base."""


class ParameterError(UnitalsError):
    """An argument is outside the supported parameter range."""


class ContractViolationError(UnitalsError):
    """A checked precondition between modules does not hold."""


class PlaneValidationError(UnitalsError):
    """A candidate incidence structure violates the plane axioms."""

    def __init__(self, report):
        self.report = report
        super().__init__(str(report))
