"""Exception types shared across the package."""


class UnitalsError(Exception):
    """Base class for all package-specific errors."""


class ParseError(UnitalsError):
    """Malformed textual input (labels, fingerprints, table files)."""


class ValidationError(UnitalsError):
    """A Cayley table failed a group axiom."""


class InvalidAction(UnitalsError):
    """Semidirect action images do not extend to an automorphism."""


class OrderMismatch(UnitalsError):
    """Actor order incompatible with the declared action."""


class IndexOutOfRange(UnitalsError):
    """Element index outside 0..order-1."""


class LabelNotInGroup(UnitalsError):
    """A block label does not resolve to a group element."""


class ModeOrderMismatch(UnitalsError):
    """Development mode inconsistent with the group order."""


class SamePoint(UnitalsError):
    """line_through called with p == q."""


class NotAPermutation(UnitalsError):
    """Relabeling map is not a bijection on the point set."""


class NotASteinerSystem(UnitalsError):
    """Operation requires a verified S(2,6,126)."""


class SchemaError(UnitalsError):
    """Family JSON violates the catalog schema."""


class SumInvariantError(SchemaError):
    """Expected fingerprint frequencies do not sum to 7,560,000."""


class DuplicateKey(ParseError):
    """Fingerprint text repeats a count key."""


class GroupUnavailable(UnitalsError):
    """No validated ordering and no external Cayley table for the group."""


class OrderingNotFound(UnitalsError):
    """No candidate convention reproduces the family (reconstruct_ordering)."""


class InconsistentPartial(UnitalsError):
    """Partial family already over-covers a difference."""


class UnsupportedCanonicalization(UnitalsError):
    """Canonical pruning requested for a group it does not support."""
