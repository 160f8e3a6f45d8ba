"""p-typical Witt vectors of finite length over a coefficient ring.

Arithmetic runs on the ghost side, where the Witt operations are
componentwise, and comes back by the triangular unghost solve.  Over the
exact-integer and delta-polynomial rings that is literally how the values
are computed; over truncated p-adics the coordinates are lifted to plain
integers first, so no precision is lost (specialising the universal
sum/product polynomials would evaluate the same integer polynomials).

The universal polynomials themselves are materialised lazily per
(p, q, length) and cached; they serve p-torsion rings and the dual-route
tests.
"""

from __future__ import annotations

from .dpoly import DPoly, DPolyRing, var_id
from .errors import ConfigError, InsufficientPrecision, NotDivisible, NotInGhostImage
from .padic import PadicInt, PrimeCfg
from .rings import DPolyCoeff, IntCoeff, PadicCoeff, coeff_ops_for

UNIVERSAL_LENGTH_CAP = 5

_universal_cache: dict = {}


class GhostVec:
    """Tuple of ghost components <w_0, ..., w_n>."""

    __slots__ = ("comps", "ops")

    def __init__(self, comps, ops):
        self.comps = tuple(comps)
        self.ops = ops

    def __len__(self):
        return len(self.comps)

    def __getitem__(self, i):
        return self.comps[i]

    def __repr__(self):
        return f"<{', '.join(map(repr, self.comps))}>"


class WittVec:
    """Witt vector (x_0, ..., x_n) over a coefficient-ring adapter."""

    __slots__ = ("coords", "ops")

    def __init__(self, coords, ops):
        coords = tuple(coords)
        if not coords:
            raise ConfigError("Witt vectors have length >= 1")
        self.coords = coords
        self.ops = ops

    def __len__(self):
        return len(self.coords)

    @property
    def cfg(self) -> PrimeCfg:
        return self.ops.cfg

    def __repr__(self):
        return f"W({', '.join(map(repr, self.coords))})"

    def __eq__(self, other):
        if not isinstance(other, WittVec) or len(self) != len(other):
            return NotImplemented
        return all(self.ops.eq(a, b) for a, b in zip(self.coords, other.coords))

    def __hash__(self):
        raise TypeError("WittVec is compared coordinatewise; not hashable")

    def to_json(self) -> dict:
        def enc(c):
            if isinstance(c, PadicInt):
                return c.to_json()
            if isinstance(c, DPoly):
                return c.to_json()
            return int(c)

        return {"p": self.cfg.p, "coords": [enc(c) for c in self.coords]}


def from_int_coords(coords, cfg: PrimeCfg) -> WittVec:
    return WittVec([int(c) for c in coords], IntCoeff(cfg))


# -- ghost / unghost ------------------------------------------------------


class QPowerLadder:
    """Incrementally computed powers a, a^q, a^{q^2}, ... of one element."""

    __slots__ = ("ops", "powers", "q")

    def __init__(self, ops, base):
        self.ops = ops
        self.q = ops.cfg.q
        self.powers = [base]

    def get(self, j):
        while len(self.powers) <= j:
            self.powers.append(self.ops.pow(self.powers[-1], self.q))
        return self.powers[j]


def ghost(w: WittVec) -> GhostVec:
    """w_h = x_0^{q^h} + p x_1^{q^{h-1}} + ... + p^h x_h."""
    ops = w.ops
    p = ops.cfg.p
    ladders = [QPowerLadder(ops, c) for c in w.coords]
    comps = []
    for h in range(len(w)):
        acc = ladders[0].get(h)
        for i in range(1, h + 1):
            acc = ops.add(acc, ops.mul(ops.from_int(p**i), ladders[i].get(h - i)))
        comps.append(acc)
    return GhostVec(comps, ops)


def unghost(g: GhostVec) -> WittVec:
    """Triangular solve; coordinate h costs h exact divisions by p.

    Over torsion-free rings this is exact; over PadicInt coordinate h is
    returned with precision N - h.  A failed division raises
    NotInGhostImage.
    """
    ops = g.ops
    p = ops.cfg.p
    coords = []
    ladders = []
    for h in range(len(g)):
        acc = g[h]
        for i in range(h):
            acc = ops.sub(acc, ops.mul(ops.from_int(p**i), ladders[i].get(h - i)))
        if h:
            try:
                acc = ops.exact_div_p(acc, h)
            except NotDivisible as exc:
                raise NotInGhostImage(f"component {h}: {exc}") from None
        coords.append(acc)
        ladders.append(QPowerLadder(ops, acc))
    return WittVec(coords, ops)


def _lift_to_int(w: WittVec) -> WittVec:
    return WittVec([c.lift() for c in w.coords], IntCoeff(w.cfg))


def _reduce_coords(ints, precs, ops):
    """Reduce integer results back to PadicInt at the given precisions."""
    return WittVec(
        [PadicInt(v, n, ops.cfg) for v, n in zip(ints, precs)], ops
    )


def _prefix_min_precs(coord_groups, length, shift=0):
    """Precision of output slot h = min precision of all inputs x_0..x_{h+shift}."""
    out = []
    for h in range(length):
        out.append(
            min(
                c.precision
                for coords in coord_groups
                for c in coords[: h + shift + 1]
            )
        )
    return out


def _componentwise(x: WittVec, y: WittVec, fn) -> WittVec:
    if len(x) != len(y):
        raise ConfigError(f"length mismatch: {len(x)} vs {len(y)}")
    if x.ops.cfg != y.ops.cfg:
        raise ConfigError("mixed primes")
    if x.ops.kind == "padic":
        xi, yi = _lift_to_int(x), _lift_to_int(y)
        zz = _componentwise(xi, yi, fn)
        precs = _prefix_min_precs([x.coords, y.coords], len(x))
        return _reduce_coords(zz.coords, precs, x.ops)
    ops = x.ops
    gx, gy = ghost(x), ghost(y)
    return unghost(GhostVec([fn(ops, a, b) for a, b in zip(gx.comps, gy.comps)], ops))


def witt_add(x: WittVec, y: WittVec) -> WittVec:
    return _componentwise(x, y, lambda ops, a, b: ops.add(a, b))


def witt_mul(x: WittVec, y: WittVec) -> WittVec:
    return _componentwise(x, y, lambda ops, a, b: ops.mul(a, b))


def witt_neg(x: WittVec) -> WittVec:
    if x.ops.kind == "padic":
        precs = _prefix_min_precs([x.coords], len(x))
        return _reduce_coords(witt_neg(_lift_to_int(x)).coords, precs, x.ops)
    ops = x.ops
    g = ghost(x)
    return unghost(GhostVec([ops.neg(a) for a in g.comps], ops))


def witt_zero(length: int, ops) -> WittVec:
    return WittVec([ops.zero()] * length, ops)


# -- Frobenius, restriction, Verschiebung, Teichmueller --------------------


def frobenius_power(w: WittVec, k: int) -> WittVec:
    """F^k in one ghost/unghost round trip: unghost(<z_k, ..., z_n>)."""
    if k == 0:
        return w
    if len(w) < k + 1:
        raise ConfigError(f"F^{k} needs length >= {k + 1}")
    if w.ops.kind == "padic":
        precs = _prefix_min_precs([w.coords], len(w) - k, shift=k)
        return _reduce_coords(frobenius_power(_lift_to_int(w), k).coords, precs, w.ops)
    g = ghost(w)
    return unghost(GhostVec(g.comps[k:], w.ops))


def frobenius(w: WittVec) -> WittVec:
    """Ghost contract F<z_0,...,z_n> = <z_1,...,z_n>."""
    if len(w) < 2:
        raise ConfigError("Frobenius needs length >= 2")
    return frobenius_power(w, 1)


def restriction(w: WittVec) -> WittVec:
    if len(w) < 2:
        raise ConfigError("restriction needs length >= 2")
    return WittVec(w.coords[:-1], w.ops)


def verschiebung(w: WittVec) -> WittVec:
    return WittVec((w.ops.zero(),) + w.coords, w.ops)


def teichmuller(a, length: int, ops) -> WittVec:
    return WittVec([a] + [ops.zero()] * (length - 1), ops)


def exp_delta(r, length_n: int, ops) -> WittVec:
    """Universal map with ghost <r, phi r, ..., phi^n r>; length n+1.

    Over PadicInt coordinate h is known mod p^(N-h): the divisions encode
    genuine Fermat quotients.
    """
    if ops.kind == "padic" and r.precision < length_n:
        raise InsufficientPrecision(
            f"exp_delta to length {length_n + 1} needs precision >= {length_n}"
        )
    comps = [r]
    for _ in range(length_n):
        comps.append(ops.frobenius(comps[-1]))
    return unghost(GhostVec(comps, ops))


def int_to_witt(c: int, length: int, ops) -> WittVec:
    """Image of an integer under the unique ring map Z -> W_n(B)."""
    return exp_delta(ops.from_int(c), length - 1, ops)


# -- universal polynomials -------------------------------------------------


def universal_polys(cfg: PrimeCfg, length: int, op: str, cap: int = UNIVERSAL_LENGTH_CAP):
    """Universal coordinate polynomials for 'add', 'mul' or 'frobenius'.

    Computed once per (p, q, length, op) by symbolic unghosting over the
    free torsion-free ring on the coordinates, then cached.  Lengths above
    `cap` are refused; concrete rings fall back to ghost-side arithmetic.
    """
    key = (cfg.p, cfg.q, length, op)
    got = _universal_cache.get(key)
    if got is not None:
        return got
    if length > cap:
        raise ConfigError(
            f"universal {op} polynomials capped at length {cap} (asked {length})"
        )
    if op == "frobenius":
        ring = DPolyRing(cfg, ngens=length)
        ops = DPolyCoeff(ring)
        x = WittVec([ring.gen(j) for j in range(length)], ops)
        result = frobenius(x).coords
    else:
        ring = DPolyRing(cfg, ngens=2 * length)
        ops = DPolyCoeff(ring)
        x = WittVec([ring.gen(j) for j in range(length)], ops)
        y = WittVec([ring.gen(length + j) for j in range(length)], ops)
        result = (witt_add(x, y) if op == "add" else witt_mul(x, y)).coords
    _universal_cache[key] = result
    return result


def apply_universal(x: WittVec, y: WittVec, op: str) -> WittVec:
    """Specialise the cached universal polynomials at concrete coordinates."""
    length = len(x)
    polys = universal_polys(x.cfg, length, op)
    ring = polys[0].ring
    mapping = {}
    for j in range(length):
        xv = x.coords[j] if isinstance(x.coords[j], int) else x.coords[j].lift()
        yv = y.coords[j] if isinstance(y.coords[j], int) else y.coords[j].lift()
        mapping[var_id(j, 0)] = xv
        mapping[var_id(length + j, 0)] = yv
    out = [poly.subs(mapping, ring=ring).constant_term() for poly in polys]
    if x.ops.kind == "padic":
        precs = _prefix_min_precs([x.coords, y.coords], length)
        return _reduce_coords(out, precs, x.ops)
    return WittVec(out, x.ops)
