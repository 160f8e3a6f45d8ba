"""m-shifted Witt vectors and the lateral Frobenius.

W_{[m]n}(B) = R^{m+1} x B^n carries the ghost map of the concatenated
tuple.  The lateral Frobenius F~ applies phi to the head and solves the
tail from the ghost contract

    F_w<z_0,...,z_{m+n}> = <phi(z_0),...,phi(z_m), z_{m+2},...,z_{m+n}>,

i.e. tail coordinate h obeys the recurrence

    F~_h = sum_{i<h} p^{i-h} (x_i^{q^{(h+1)-i}} - F~_i^{q^{h-i}})
           + x_h^q + p x_{h+1},

in which every division is exact.  A failed division is a bug in the
theory, not a data error, and raises InternalInvariantError.
"""

from __future__ import annotations

from .errors import (
    ConfigError,
    InsufficientPrecision,
    InternalInvariantError,
    NotDivisible,
)
from .padic import PadicInt
from .rings import IntCoeff
from .witt import GhostVec, QPowerLadder, WittVec, frobenius_power, ghost, unghost


class ShiftedWitt:
    """Shifted Witt vector with head (x_0..x_m) over R and tail over B."""

    __slots__ = ("m", "head", "tail", "ops")

    def __init__(self, m: int, head, tail, ops):
        head, tail = tuple(head), tuple(tail)
        if m < 0 or len(head) != m + 1:
            raise ConfigError(f"head must have length m+1 = {m + 1}")
        self.m = m
        self.head = head
        self.tail = tail
        self.ops = ops

    @property
    def n(self) -> int:
        return len(self.tail)

    @property
    def coords(self) -> tuple:
        return self.head + self.tail

    @property
    def cfg(self):
        return self.ops.cfg

    def __repr__(self):
        h = ", ".join(map(repr, self.head))
        t = ", ".join(map(repr, self.tail))
        return f"SW[{self.m}]({h}; {t})"

    def __eq__(self, other):
        if not isinstance(other, ShiftedWitt):
            return NotImplemented
        if self.m != other.m or self.n != other.n:
            return NotImplemented
        return all(self.ops.eq(a, b) for a, b in zip(self.coords, other.coords))

    def __hash__(self):
        raise TypeError("ShiftedWitt is compared coordinatewise; not hashable")

    def to_json(self) -> dict:
        def enc(c):
            return c.to_json() if hasattr(c, "to_json") else int(c)

        return {
            "m": self.m,
            "head": [enc(c) for c in self.head],
            "tail": [enc(c) for c in self.tail],
        }


def shifted_ghost(s: ShiftedWitt) -> GhostVec:
    """Same triangular ghost formula, applied to the concatenated tuple."""
    return ghost(WittVec(s.coords, s.ops))


def include(s: ShiftedWitt) -> WittVec:
    """The natural map I: W_{[m]n}(B) -> W_{m+n}(B), identity on coordinates."""
    return WittVec(s.coords, s.ops)


def shifted_unghost(g: GhostVec, m: int) -> ShiftedWitt:
    w = unghost(g)
    return ShiftedWitt(m, w.coords[: m + 1], w.coords[m + 1 :], w.ops)


def restriction_t(s: ShiftedWitt) -> ShiftedWitt:
    """T drops the last tail coordinate (last ghost slot on the ghost side)."""
    if s.n < 1:
        raise ConfigError("restriction needs a nonempty tail")
    return ShiftedWitt(s.m, s.head, s.tail[:-1], s.ops)


def _lift(s: ShiftedWitt) -> ShiftedWitt:
    ints = IntCoeff(s.cfg)
    return ShiftedWitt(
        s.m, [c.lift() for c in s.head], [c.lift() for c in s.tail], ints
    )


def _reduce(s_int: ShiftedWitt, model: ShiftedWitt) -> ShiftedWitt:
    """Back to PadicInt; output slot h depends on model inputs x_0..x_{h+1}."""
    precs = [c.precision for c in model.coords]
    out = []
    for h, v in enumerate(s_int.coords):
        ph = precs[h] if h <= s_int.m else min(precs[: h + 2])
        out.append(PadicInt(v, ph, model.cfg))
    return ShiftedWitt(s_int.m, out[: s_int.m + 1], out[s_int.m + 1 :], model.ops)


def lateral_frobenius(s: ShiftedWitt) -> ShiftedWitt:
    """F~: W_{[m]n}(B) -> W_{[m]n-1}(B); head phi, tail by the recurrence."""
    if s.n < 1:
        raise ConfigError("lateral Frobenius needs tail length n >= 1")
    if s.ops.kind == "padic":
        if min(c.precision for c in s.coords) < 1:
            raise InsufficientPrecision("lateral Frobenius needs at least one digit")
        return _reduce(lateral_frobenius(_lift(s)), s)
    ops = s.ops
    p, q = ops.cfg.p, ops.cfg.q
    m = s.m
    x = s.coords
    out = [ops.frobenius(x[i]) for i in range(m + 1)]
    x_ladders = [QPowerLadder(ops, c) for c in x]
    out_ladders = [QPowerLadder(ops, c) for c in out]
    for h in range(m + 1, m + s.n):
        acc = ops.add(ops.pow(x[h], q), ops.mul(ops.from_int(p), x[h + 1]))
        for i in range(h):
            diff = ops.sub(x_ladders[i].get(h + 1 - i), out_ladders[i].get(h - i))
            try:
                acc = ops.add(acc, ops.exact_div_p(diff, h - i))
            except NotDivisible as exc:
                raise InternalInvariantError(
                    f"lateral Frobenius division failed at h={h}, i={i}: {exc}"
                ) from None
        out.append(acc)
        out_ladders.append(QPowerLadder(ops, acc))
    return ShiftedWitt(m, out[: m + 1], out[m + 1 :], ops)


def _shifted_componentwise(x: ShiftedWitt, y: ShiftedWitt, fn) -> ShiftedWitt:
    if x.m != y.m or x.n != y.n:
        raise ConfigError("shape mismatch")
    if x.ops.kind == "padic":
        xi, yi = _lift(x), _lift(y)
        zz = _shifted_componentwise(xi, yi, fn)
        precs_x = [c.precision for c in x.coords]
        precs_y = [c.precision for c in y.coords]
        out = []
        running = None
        for h, v in enumerate(zz.coords):
            ph = min(precs_x[h], precs_y[h])
            running = ph if running is None else min(running, ph)
            out.append(PadicInt(v, running, x.cfg))
        return ShiftedWitt(x.m, out[: x.m + 1], out[x.m + 1 :], x.ops)
    ops = x.ops
    gx, gy = shifted_ghost(x), shifted_ghost(y)
    comps = [fn(ops, a, b) for a, b in zip(gx.comps, gy.comps)]
    return shifted_unghost(GhostVec(comps, ops), x.m)


def shifted_add(x: ShiftedWitt, y: ShiftedWitt) -> ShiftedWitt:
    return _shifted_componentwise(x, y, lambda ops, a, b: ops.add(a, b))


def shifted_mul(x: ShiftedWitt, y: ShiftedWitt) -> ShiftedWitt:
    return _shifted_componentwise(x, y, lambda ops, a, b: ops.mul(a, b))


class CommReport:
    """Outcome of the compositional identity F^{m+2} I = F^{m+1} I F~."""

    __slots__ = ("m", "n", "equal", "lhs", "rhs", "detail")

    def __init__(self, m, n, equal, lhs, rhs, detail=""):
        self.m = m
        self.n = n
        self.equal = equal
        self.lhs = lhs
        self.rhs = rhs
        self.detail = detail

    def __bool__(self):
        return self.equal

    def __repr__(self):
        status = "equal" if self.equal else f"DIFFER ({self.detail})"
        return f"CommReport(m={self.m}, n={self.n}, {status})"


def check_comm_identity(s: ShiftedWitt) -> CommReport:
    """Evaluate both composites coordinatewise; needs n >= 2."""
    if s.n < 2:
        raise ConfigError("identity is stated only for n >= 2")
    lhs = frobenius_power(include(s), s.m + 2)
    rhs = frobenius_power(include(lateral_frobenius(s)), s.m + 1)
    bad = [
        h
        for h, (a, b) in enumerate(zip(lhs.coords, rhs.coords))
        if not s.ops.eq(a, b)
    ]
    detail = f"coordinates {bad} differ" if bad else ""
    return CommReport(s.m, s.n, not bad, lhs, rhs, detail)
