"""Coefficient-ring adapters used by the Witt vector machinery.

Three coefficient rings carry all computations: exact integers (torsion
free, used for oracles and universal polynomials), truncated p-adic
integers, and delta-polynomials (symbolic identities).  Each adapter
exposes the same small surface: ring operations, the Frobenius lift phi,
the pi-derivation delta, and exact division by p.
"""

from __future__ import annotations

from .dpoly import DPoly, DPolyRing
from .errors import ConfigError, NotDivisible
from .padic import PadicInt, PrimeCfg


class IntCoeff:
    """Exact integers viewed inside Z_p (phi = identity, Fermat delta)."""

    kind = "int"

    def __init__(self, cfg: PrimeCfg):
        self.cfg = cfg

    def zero(self):
        return 0

    def one(self):
        return 1

    def from_int(self, c):
        return int(c)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def pow(self, a, k):
        return a**k

    def eq(self, a, b):
        return a == b

    def is_zero(self, a):
        return a == 0

    def frobenius(self, a):
        return a

    def delta(self, a):
        num = a - a**self.cfg.q
        assert num % self.cfg.p == 0
        return num // self.cfg.p

    def exact_div_p(self, a, k=1):
        pk = self.cfg.p**k
        if a % pk:
            raise NotDivisible(f"{a} not divisible by p^{k}")
        return a // pk


class PadicCoeff:
    """Truncated p-adic integers; see padic.PadicInt for the semantics."""

    kind = "padic"

    def __init__(self, cfg: PrimeCfg, precision: int):
        self.cfg = cfg
        self.precision = precision

    def zero(self):
        return PadicInt(0, self.precision, self.cfg)

    def one(self):
        return PadicInt(1, self.precision, self.cfg)

    def from_int(self, c):
        if isinstance(c, PadicInt):
            return c
        return PadicInt(int(c), self.precision, self.cfg)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def pow(self, a, k):
        return a**k

    def eq(self, a, b):
        return a == b

    def is_zero(self, a):
        return a.residue == 0

    def frobenius(self, a):
        return a

    def delta(self, a):
        return a.fermat_delta()

    def exact_div_p(self, a, k=1):
        out = a
        for _ in range(k):
            out = out.exact_div_pi()
        return out


class DPolyCoeff:
    """Delta-polynomials; phi and delta are the structural ones."""

    kind = "dpoly"

    def __init__(self, ring: DPolyRing):
        self.ring = ring
        self.cfg = ring.cfg

    def zero(self):
        return self.ring.zero()

    def one(self):
        return self.ring.const(1)

    def from_int(self, c):
        if isinstance(c, DPoly):
            return c
        return self.ring.const(int(c))

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def pow(self, a, k):
        return a**k

    def eq(self, a, b):
        return (a - b).is_zero()

    def is_zero(self, a):
        return a.is_zero()

    def frobenius(self, a):
        return a.frobenius()

    def delta(self, a):
        return a.delta()

    def exact_div_p(self, a, k=1):
        return a.exact_div_p(k)


def coeff_ops_for(value, cfg: PrimeCfg, precision: int | None = None):
    """Pick the adapter matching a sample coordinate value."""
    if isinstance(value, PadicInt):
        if value.cfg != cfg:
            raise ConfigError("mixed primes")
        return PadicCoeff(cfg, precision if precision is not None else value.precision)
    if isinstance(value, DPoly):
        return DPolyCoeff(value.ring)
    if isinstance(value, int):
        return IntCoeff(cfg)
    raise ConfigError(f"unsupported coordinate type {type(value).__name__}")
