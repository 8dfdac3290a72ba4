"""Exception types shared across the workbench."""


class DcfwbError(Exception):
    """Base class for all workbench errors."""


class CapExceededError(DcfwbError):
    """A configured hard cap (derivative order, degree, monomial count, budget) was exceeded."""


class PolyParseError(DcfwbError):
    """Syntax error in differential-polynomial text. Carries the offset of the offending character."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class NoLeaderError(DcfwbError):
    """Leader/initial/separant requested for a variable the polynomial does not involve."""


class MissingAssignmentError(DcfwbError):
    """eval_subst hit a variable with no assigned value."""


class InconsistentConstraintsError(DcfwbError):
    """A constraint set forced the unit: no common zero exists."""


class TowerLimitationError(DcfwbError):
    """Tower representation failure: the computation left the certifiable fragment.

    Distinct from inconsistency; the inputs may well be consistent, we just
    cannot represent the required tower within the supported fragment/caps.
    """


class UnsupportedFragmentError(DcfwbError):
    """A closure-engine or consistency-oracle query fell outside the supported fragment.

    Runs abort loudly with this rather than guessing. CLI exit code 2.
    """


class HorizonError(DcfwbError):
    """Bounded search ended at its boundary while a witness is detectable beyond it."""


class VerificationError(DcfwbError):
    """A trace or result bundle failed replay verification."""
