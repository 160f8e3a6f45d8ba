"""Exception hierarchy shared by all arithjet modules."""


class ArithjetError(Exception):
    """Base class for all library errors."""


class ConfigError(ArithjetError):
    """Incompatible configurations (mismatched primes, lengths, rings)."""


class NotDivisible(ArithjetError):
    """Exact division by p requested on a unit."""


class InsufficientPrecision(ArithjetError):
    """An operation would need more p-adic digits than are available."""


class NoHenselLift(ArithjetError):
    """Seed is not a simple root modulo p."""


class NotInGhostImage(ArithjetError):
    """A ghost vector does not come from a Witt vector over this ring."""


class UnsupportedPrime(ArithjetError):
    """Operation requires p >= 3."""


class InvalidCurve(ArithjetError):
    """Curve has bad reduction or otherwise violates a precondition."""


class InvalidPoint(ArithjetError):
    """Point does not satisfy the defining equations."""


class ConvergenceDomain(ArithjetError):
    """Series argument lies outside the guaranteed convergence domain."""


class UnsupportedAnomalous(ArithjetError):
    """Full-group character evaluation on an anomalous curve."""


class TermBudgetExceeded(ArithjetError):
    """A symbolic computation outgrew the configured term cap."""


class InternalInvariantError(ArithjetError):
    """A division or identity the theory guarantees has failed; this is a bug."""
