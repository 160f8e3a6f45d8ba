"""Centered polynomials: witnesses, Frobenius-power expansion, and the
Witt-coordinate <-> delta-coordinate change.

A polynomial G(T_1,...,T_k) is centered if G(0,...,0) = 0. Centered
polynomials are the certificate currency of the constructive proofs: each
witness here records an exact polynomial identity that the tests re-expand
from scratch.
"""

from __future__ import annotations

from math import comb

from .dpoly import DPoly, DPolyRing, var_id, var_parts
from .errors import ConfigError, InternalInvariantError, UnsupportedPrime
from .padic import PrimeCfg

_phi_del_cache: dict = {}
_coord_change_cache: dict = {}


class CenteredWitness:
    """A centered polynomial together with the values bound to its slots.

    `expr` lives in a free delta-ring on slot generators; `slots` maps the
    variable ids appearing in expr to values in a target ring.  The
    defining property expr(0,...,0) = 0 and the identity expr(slots) ==
    target are both checked by exact expansion, never assumed.
    """

    __slots__ = ("expr", "slots", "trace")

    def __init__(self, expr: DPoly, slots: dict, trace: str = ""):
        self.expr = expr
        self.slots = dict(slots)
        self.trace = trace

    def is_centered(self) -> bool:
        return self.expr.constant_term() == 0

    def evaluate(self, ring: DPolyRing | None = None) -> DPoly:
        return self.expr.subs(self.slots, ring=ring)

    def matches(self, target: DPoly) -> bool:
        return (self.evaluate(target.ring) - target).is_zero()

    def __repr__(self):
        return f"CenteredWitness({self.expr!r}; trace={self.trace!r})"

    # closure operations, constructive versions of the centered-set lemma

    def __add__(self, other: "CenteredWitness") -> "CenteredWitness":
        slots = dict(self.slots)
        slots.update(other.slots)
        return CenteredWitness(self.expr + other.expr, slots, "sum")

    def __mul__(self, other: "CenteredWitness") -> "CenteredWitness":
        slots = dict(self.slots)
        slots.update(other.slots)
        return CenteredWitness(self.expr * other.expr, slots, "product")

    def apply_delta(self) -> "CenteredWitness":
        """delta of a centered combination, centered in the enlarged slots.

        The slot generators gain their order-1 successors, bound to delta
        of the original slot values.
        """
        new_expr = self.expr.delta()
        slots = dict(self.slots)
        for v in new_expr.variables():
            if v not in slots:
                g, o = var_parts(v)
                if o == 0:
                    raise InternalInvariantError("unbound order-0 slot after delta")
                base = slots.get(var_id(g, o - 1))
                if base is None:
                    raise InternalInvariantError("slot ladder has a gap")
                slots[v] = base.delta()
        return CenteredWitness(new_expr, slots, "delta")

    def push_through(self, fn) -> "CenteredWitness":
        """Image under a ring map applied to the slot values."""
        return CenteredWitness(
            self.expr, {v: fn(val) for v, val in self.slots.items()}, "pushforward"
        )


# -- Frobenius power expansion ----------------------------------------------


def phi_del_polynomial(cfg: PrimeCfg, m: int, term_cap: int = 10**6) -> DPoly:
    """The centered P_{m-1} with Psi^m(T) = p^m * d^m T + P_{m-1}(T,...,d^{m-1}T).

    Built by the recursion

        P_{m-1} = (p^{m-1} T_{m-1})^q + P_{m-2}^q + p * dP_{m-2}
                  + p^{m-1} (1 - p^{(m-1)(q-1)}) T_{m-1}^q,

    in the free delta-ring on one generator; T_i denotes delta-order i.
    """
    if m < 1:
        raise ConfigError("m >= 1")
    key = (cfg.p, cfg.q, m)
    got = _phi_del_cache.get(key)
    if got is not None:
        return got
    ring = DPolyRing(cfg, ngens=1, term_cap=term_cap)
    p, q = cfg.p, cfg.q
    P = ring.gen(0, 0) ** q
    _phi_del_cache[(cfg.p, cfg.q, 1)] = P
    for k in range(2, m + 1):
        Tk = ring.gen(0, k - 1)
        P = (
            (p ** (k - 1) * Tk) ** q
            + P**q
            + p * P.delta()
            + (p ** (k - 1) - p ** ((k - 1) * q)) * Tk**q
        )
        _phi_del_cache[(cfg.p, cfg.q, k)] = P
    return _phi_del_cache[key]


def phi_power_expand(a: DPoly, m: int):
    """Split Psi^m(a) as p^m * delta^m(a) + centered remainder.

    Returns (delta^m a, witness); the witness slots are a, delta a, ...,
    delta^{m-1} a and the identity holds exactly in a's ring.
    """
    if m < 1:
        raise ConfigError("m >= 1")
    ring = a.ring
    P = phi_del_polynomial(ring.cfg, m, ring.term_cap)
    lead = a
    ladder = [a]
    for _ in range(m):
        lead = lead.delta()
        ladder.append(lead)
    slots = {var_id(0, i): ladder[i] for i in range(m)}
    return lead, CenteredWitness(P, slots, f"phi-del m={m}")


def frobenius_power_of(a: DPoly, m: int) -> DPoly:
    """Psi^m(a) computed independently by iterating the Frobenius lift."""
    out = a
    for _ in range(m):
        out = out.frobenius()
    return out


# -- Witt coordinate <-> delta coordinate change -----------------------------


class CoordChange:
    """Substitution maps between Witt coordinates t_0..t_n and the delta
    coordinates t_0, dt_0, ..., d^n t_0, with centered witnesses.

    `w2d[k]` expresses t_k in the free delta-ring on t_0 (variable ids
    (0, i)); `d2w[k]` expresses d^k t_0 as a polynomial in t_0..t_k
    (variable ids (k, 0) for generator k).  witnesses[k] is the centered
    certificate for t_k - d^k t_0 in slots t_0..t_{k-1}.
    """

    __slots__ = ("cfg", "n", "delta_ring", "witt_ring", "w2d", "d2w", "witnesses")

    def __init__(self, cfg, n, delta_ring, witt_ring, w2d, d2w, witnesses):
        self.cfg = cfg
        self.n = n
        self.delta_ring = delta_ring
        self.witt_ring = witt_ring
        self.w2d = w2d
        self.d2w = d2w
        self.witnesses = witnesses

    def witt_to_delta_map(self) -> dict:
        return {var_id(k, 0): self.w2d[k] for k in range(self.n + 1)}

    def delta_to_witt_map(self) -> dict:
        return {var_id(0, k): self.d2w[k] for k in range(self.n + 1)}

    def roundtrip_ok(self) -> bool:
        for k in range(self.n + 1):
            back = self.w2d[k].subs(self.delta_to_witt_map(), ring=self.witt_ring)
            if not (back - self.witt_ring.gen(k, 0)).is_zero():
                return False
            fwd = self.d2w[k].subs(self.witt_to_delta_map(), ring=self.delta_ring)
            if not (fwd - self.delta_ring.gen(0, k)).is_zero():
                return False
        return True


def coord_change(cfg: PrimeCfg, n: int, term_cap: int = 10**6) -> CoordChange:
    """Build the level-n coordinate change.  Requires p >= 3.

    The Witt coordinates are assumed to satisfy the ghost-style tower
    Psi^k(t_0) = t_0^{q^k} + p t_1^{q^{k-1}} + ... + p^k t_k; then

        t_k = d t_{k-1} + sum_{i<=k-2} sum_{j=1}^{q^{k-1-i}}
              p^{i+j-k} C(q^{k-1-i}, j) t_i^{q (q^{k-1-i}-j)} (d t_i)^j,

    every coefficient p-integral.
    """
    if cfg.p == 2:
        raise UnsupportedPrime("coordinate change needs v_p(p) <= p - 2, i.e. p >= 3")
    key = (cfg.p, cfg.q, n)
    got = _coord_change_cache.get(key)
    if got is not None:
        return got
    p, q = cfg.p, cfg.q
    D = DPolyRing(cfg, ngens=1, term_cap=term_cap)
    W = DPolyRing(cfg, ngens=n + 1, term_cap=term_cap)

    w2d: list[DPoly] = [D.gen(0, 0)]
    deltas: list[DPoly] = []
    for k in range(1, n + 1):
        deltas.append(w2d[k - 1].delta())
        acc = deltas[k - 1]
        for i in range(k - 1):
            qk = q ** (k - 1 - i)
            dpow = [D.const(1)]
            for _ in range(qk):
                dpow.append(dpow[-1] * deltas[i])
            for j in range(1, qk + 1):
                c = comb(qk, j)
                e = i + j - k
                if e < 0:
                    if c % p ** (-e):
                        raise InternalInvariantError(
                            f"coord change coefficient not p-integral at k={k},i={i},j={j}"
                        )
                    c //= p ** (-e)
                else:
                    c *= p**e
                acc = acc + c * w2d[i] ** (q * (qk - j)) * dpow[j]
        w2d.append(acc)

    d2w: list[DPoly] = [W.gen(0, 0)]
    witnesses: list[CenteredWitness | None] = [None]
    for k in range(1, n + 1):
        corr = w2d[k] - D.gen(0, k)
        lowered = corr.subs(
            {var_id(0, i): d2w[i] for i in range(k)}, ring=W
        )
        d2w.append(W.gen(k, 0) - lowered)
        slot_vals = {var_id(i, 0): W.gen(i, 0) for i in range(k)}
        witnesses.append(
            CenteredWitness(lowered, slot_vals, f"coord3 level {k}")
        )

    change = CoordChange(cfg, n, D, W, w2d, d2w, witnesses)
    _coord_change_cache[key] = change
    return change
