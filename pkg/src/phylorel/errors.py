"""Exception hierarchy.

Every error carries an optional ``witness`` (pair, triple, cycle, ...) so
callers and tests can point at the offending taxa.  Errors fall into three
families that the command line maps onto exit codes.
"""


class PhyloError(Exception):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class InputError(PhyloError):
    """Malformed input text or arguments (exit code 2)."""


class ValidationError(PhyloError):
    """Input is well formed but not a valid relation/metric/tree (exit code 3)."""


class RealizationError(PhyloError):
    """Valid input that no tree realizes, or no placement exists (exit code 4)."""


# --- tree core -------------------------------------------------------------

class UnknownVertex(InputError):
    pass


class UnknownTaxon(InputError):
    pass


class NotRooted(ValidationError):
    pass


class EmptySubset(InputError):
    pass


class TerminalEdge(ValidationError):
    pass


class TreeSyntaxError(InputError):
    def __init__(self, message, position=None):
        super().__init__(f"{message} (at offset {position})" if position is not None else message,
                         witness=position)
        self.position = position


class DuplicateTaxon(InputError):
    pass


class BadLabel(InputError):
    pass


class TooFewTaxa(InputError):
    pass


class TaxaMismatch(InputError):
    pass


# --- event relations -------------------------------------------------------

class DuplicatePair(InputError):
    pass


class ZeroOneConflict(ValidationError):
    pass


class NotEquivalence(ValidationError):
    pass


class ClassInconsistency(ValidationError):
    pass


class NotForest(ValidationError):
    pass


class InPointerConflict(ValidationError):
    pass


class MixedKindConflict(ValidationError):
    pass


class NoSource(ValidationError):
    pass


class InvalidRootChoice(InputError):
    pass


class UnknownRepresentative(InputError):
    pass


class Disconnected(ValidationError):
    pass


# --- ternary maps and quartets ---------------------------------------------

class ConflictingTriple(InputError):
    pass


class MissingTriple(InputError):
    pass


class Condition3Violation(ValidationError):
    pass


class QuartetConflict(ValidationError):
    pass


class NotTransitive(ValidationError):
    pass


class NotRealizable(RealizationError):
    pass


class NoPseudoCherry(NotRealizable):
    """Bottom-up reconstruction stalled: no two taxa are equivalent."""


class NonDiscriminating(RealizationError):
    pass


class NoPlacement(RealizationError):
    pass


class AmbiguousPlacement(RealizationError):
    pass


class Inconsistent(RealizationError):
    pass


# --- oracles ---------------------------------------------------------------

class TooLarge(InputError):
    pass


# --- diagnostics (non-fatal) -----------------------------------------------

class PhyloWarning(UserWarning):
    pass


class Degree2Root(PhyloWarning):
    """The reconstruction contains a single hub of degree two."""


class TwoComponents(PhyloWarning):
    """The quotient has exactly two components; no binary tree exists."""


class NoCentralVertex(PhyloWarning):
    """Some component of a mixed relation has no central vertex."""
