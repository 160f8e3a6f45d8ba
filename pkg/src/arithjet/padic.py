"""Truncated p-adic integers with explicit precision tracking.

A `PadicInt` is an integer known modulo p^N.  Every arithmetic operation
returns the worst-case guaranteed precision: ring operations keep the
minimum of the input precisions, each exact division by p costs exactly
one digit.  Residues are kept in the canonical range [0, p^N).
"""

from __future__ import annotations

import json

from .errors import ConfigError, InsufficientPrecision, NoHenselLift, NotDivisible


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class PrimeCfg:
    """Prime configuration: p and the residue-field size q = p^s.

    Only q = p is exercised by the shipped test corpus; q is kept as a
    parameter because the Witt/ghost formulas are uniform in it.
    """

    __slots__ = ("p", "s", "q")

    def __init__(self, p: int, s: int = 1):
        if not _is_prime(p):
            raise ConfigError(f"p = {p} is not prime")
        if s < 1:
            raise ConfigError(f"q must be a positive power of p (got exponent {s})")
        self.p = p
        self.s = s
        self.q = p**s

    @property
    def e_bound_ok(self) -> bool:
        """Whether v_p(p) = 1 <= p - 2, i.e. p >= 3."""
        return self.p >= 3

    def __eq__(self, other):
        return isinstance(other, PrimeCfg) and (self.p, self.s) == (other.p, other.s)

    def __hash__(self):
        return hash((self.p, self.s))

    def __repr__(self):
        if self.s == 1:
            return f"PrimeCfg(p={self.p})"
        return f"PrimeCfg(p={self.p}, q={self.q})"


class PadicInt:
    """Integer known modulo p^precision."""

    __slots__ = ("residue", "precision", "cfg")

    def __init__(self, value: int, precision: int, cfg: PrimeCfg):
        if precision < 0:
            raise ConfigError("precision must be >= 0")
        self.precision = precision
        self.cfg = cfg
        self.residue = value % (cfg.p**precision) if precision > 0 else 0

    # -- helpers -------------------------------------------------------

    def _check(self, other: "PadicInt") -> int:
        if not isinstance(other, PadicInt):
            raise TypeError(f"expected PadicInt, got {type(other).__name__}")
        if self.cfg != other.cfg:
            raise ConfigError(f"mixed primes: {self.cfg} vs {other.cfg}")
        return min(self.precision, other.precision)

    def with_precision(self, n: int) -> "PadicInt":
        if n > self.precision:
            raise InsufficientPrecision(
                f"known mod p^{self.precision}, asked for p^{n}"
            )
        return PadicInt(self.residue, n, self.cfg)

    def lift(self) -> int:
        """Canonical integer representative in [0, p^N)."""
        return self.residue

    def valuation(self) -> int:
        """v_p of the residue, capped at the precision (zero class -> N)."""
        if self.residue == 0:
            return self.precision
        v = 0
        r = self.residue
        while r % self.cfg.p == 0:
            r //= self.cfg.p
            v += 1
        return v

    def is_zero(self) -> bool:
        return self.residue == 0

    def is_unit(self) -> bool:
        return self.precision > 0 and self.residue % self.cfg.p != 0

    # -- ring operations ------------------------------------------------

    def __add__(self, other):
        n = self._check(other)
        return PadicInt(self.residue + other.residue, n, self.cfg)

    def __sub__(self, other):
        n = self._check(other)
        return PadicInt(self.residue - other.residue, n, self.cfg)

    def __mul__(self, other):
        if isinstance(other, int):
            return PadicInt(self.residue * other, self.precision, self.cfg)
        n = self._check(other)
        return PadicInt(self.residue * other.residue, n, self.cfg)

    __rmul__ = __mul__

    def __neg__(self):
        return PadicInt(-self.residue, self.precision, self.cfg)

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return PadicInt(
            pow(self.residue, k, self.cfg.p**self.precision)
            if self.precision > 0
            else 0,
            self.precision,
            self.cfg,
        )

    def __eq__(self, other):
        """Equality at the shared precision."""
        if not isinstance(other, PadicInt) or self.cfg != other.cfg:
            return NotImplemented
        n = min(self.precision, other.precision)
        m = self.cfg.p**n
        return self.residue % m == other.residue % m

    def __hash__(self):
        raise TypeError("PadicInt compares at shared precision; not hashable")

    def inverse(self) -> "PadicInt":
        if not self.is_unit():
            raise NotDivisible(f"{self} is not a unit")
        return PadicInt(
            pow(self.residue, -1, self.cfg.p**self.precision),
            self.precision,
            self.cfg,
        )

    def exact_div_pi(self) -> "PadicInt":
        """Divide by p; requires v_p >= 1 (or the zero class). Costs one digit."""
        if self.precision == 0:
            raise InsufficientPrecision("no digits left to divide")
        if self.residue % self.cfg.p != 0:
            raise NotDivisible(f"{self} has valuation 0")
        return PadicInt(self.residue // self.cfg.p, self.precision - 1, self.cfg)

    def fermat_delta(self) -> "PadicInt":
        """delta(x) = (x - x^p)/p, the p-derivation forced by phi = id on Z_p."""
        if self.cfg.s != 1:
            raise ConfigError("fermat_delta requires q = p")
        if self.precision == 0:
            raise InsufficientPrecision("need at least one digit")
        m = self.cfg.p**self.precision
        num = (self.residue - pow(self.residue, self.cfg.p, m)) % m
        return PadicInt(num // self.cfg.p, self.precision - 1, self.cfg)

    def frobenius(self) -> "PadicInt":
        """phi on Z_p with the Fermat derivation is the identity."""
        return self

    # -- presentation ----------------------------------------------------

    def __repr__(self):
        return f"{self.residue} + O({self.cfg.p}^{self.precision})"

    def to_json(self) -> dict:
        return {
            "p": self.cfg.p,
            "precision": self.precision,
            "residue": str(self.residue),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "PadicInt":
        return cls(int(obj["residue"]), int(obj["precision"]), PrimeCfg(int(obj["p"])))

    def json_str(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def hensel_root(coeffs: list[int], seed: int, cfg: PrimeCfg, precision: int) -> PadicInt:
    """Newton-lift a simple root of a monic integer polynomial.

    `coeffs` lists the coefficients from the constant term upward; the seed
    must satisfy f(seed) = 0 mod p with f'(seed) a unit, else NoHenselLift.
    """
    p = cfg.p

    def f(x, m):
        acc = 0
        for c in reversed(coeffs):
            acc = (acc * x + c) % m
        return acc

    def fprime(x, m):
        acc = 0
        for k in range(len(coeffs) - 1, 0, -1):
            acc = (acc * x + k * coeffs[k]) % m
        return acc

    if f(seed, p) != 0:
        raise NoHenselLift(f"{seed} is not a root mod {p}")
    if fprime(seed, p) % p == 0:
        raise NoHenselLift(f"{seed} is a multiple root mod {p} (derivative vanishes)")

    x = seed % p
    known = 1
    while known < precision:
        known = min(2 * known, precision)
        m = p**known
        x = (x - f(x, m) * pow(fprime(x, m), -1, m)) % m
    root = PadicInt(x, precision, cfg)
    assert f(x, p**precision) == 0
    return root
