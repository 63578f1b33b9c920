"""Exception types shared across the package."""


class ContactHCError(Exception):
    """Base class for all errors raised by contacthc."""


class NonRegularCrossing(ContactHCError):
    """A crossing form restricted to ker(Phi(t) - I) is singular."""


class NotSymplectic(ContactHCError):
    """A sampled matrix fails the symplectic check M^T Omega M = Omega."""


class OffLevelSet(ContactHCError):
    """A point does not lie on the level set it was claimed to lie on."""


class DegenerateLevel(ContactHCError):
    """The level c <= 0 carries no periodic Reeb orbits."""


class DegenerateOrbit(ContactHCError):
    """The linearized return map of an orbit has eigenvalue 1."""


class LengthMismatch(ContactHCError):
    pass


class BudgetExceeded(ContactHCError):
    """An exhaustive enumeration would exceed the configured cap."""


class InvalidData(ContactHCError):
    """Morse data failed validation."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class BoundarySquareNonzero(ContactHCError):
    pass
