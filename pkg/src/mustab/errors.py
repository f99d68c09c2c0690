"""Exception types shared across the library.

Every failure mode that callers are expected to branch on gets its own
class; anything else is a plain ValueError.
"""


class MustabError(Exception):
    """Base class for all library-specific errors."""


class FieldMismatch(MustabError):
    """Operands live in different coefficient fields or exponent groups."""


class DivisionByZero(MustabError):
    """Inversion of the zero scalar."""


class CoefficientFieldTooSmall(MustabError):
    """A required root does not exist in the configured exact field."""


class BudgetExceeded(MustabError):
    """A configured work cap (S-pairs, ansatz order, samples) was hit."""


class EmptyVariety(MustabError):
    """The ideal is the unit ideal; its vanishing locus is empty."""


class ZeroLeadingTerm(MustabError):
    """Series inversion with no known nonzero leading term."""


class PrecisionInsufficient(MustabError):
    """The tracked precision cannot support the requested answer."""


class NegativeValuation(MustabError):
    """Residue requested for a series of negative valuation."""


class IrrationalExponentInSubstitution(MustabError):
    """Substitution into a series with non-rational exponents."""


class WildRamification(MustabError):
    """Characteristic-p obstruction: p divides a ramification or binomial
    denominator."""


class SingularAtPrecision(MustabError):
    """Matrix not invertible (or no pivot found) at the tracked precision."""


class NotIntegral(MustabError):
    """Residue of a point with entries of negative valuation."""


class NotOnGroup(MustabError):
    """Entries fail the group scheme's defining equations."""


class NotCenteredAtInfinity(MustabError):
    """Branch is bounded where an unbounded one is required."""


class NotReduced(MustabError):
    """Stabilizer computation detected a non-minimal-dimension branch."""
