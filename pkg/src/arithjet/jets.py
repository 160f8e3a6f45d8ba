"""Jet-ring and kernel presentations for marked affine schemes, and the
constructive kernel-jet isomorphism certificates.

The kernel of J^{m+n}X -> J^mX over a marked point is presented on the
free delta-ring K on one generator block per original variable; its
delta structure is the structural one in these coordinates, and the
original Witt-side data enters through two universal coordinate changes:

  * ghost slots of the universal kernel point collapse to
    c + p^{m+1} t_0^{q^k} + ... on each variable block (phi = id on Z_p
    kills the head contribution), so the relation images are obtained by
    a short exact unghost rather than by expanding ambient delta-iterates;
  * the delta-coordinate expression of each relation image comes from the
    Witt <-> delta coordinate change at the ambient level.

The isomorphism certificates (the centered witnesses H_k relating the
structural-delta iterates of the first relation image to the higher
images) are built by the constructive recursion: the Frobenius-power
expansion supplies the correction term of the key relation, the witness
of level n-1 is differentiated formally, and the defect C_p term is
rewritten into lower witnesses.  Every certificate is then re-verified by
exact expansion in K.
"""

from __future__ import annotations

from .centered import CenteredWitness, coord_change, phi_del_polynomial
from .dpoly import DPoly, DPolyRing, c_pi, var_id, var_parts
from .errors import (
    ConfigError,
    InsufficientPrecision,
    InternalInvariantError,
    InvalidPoint,
    NotDivisible,
    UnsupportedPrime,
)
from .padic import PadicInt, PrimeCfg


class AffinePresentation:
    """A = R[x_1..x_d]/I with a marked R-point (affine coordinates)."""

    def __init__(self, cfg: PrimeCfg, num_vars: int, generators, point, precision: int):
        if not cfg.e_bound_ok:
            raise UnsupportedPrime("jet-space machinery needs p >= 3")
        self.cfg = cfg
        self.d = num_vars
        self.ring = DPolyRing(cfg, ngens=num_vars)
        self.generators = list(generators)
        self.precision = precision
        self.point = [
            c if isinstance(c, PadicInt) else PadicInt(int(c), precision, cfg)
            for c in point
        ]
        if len(self.point) != num_vars:
            raise ConfigError("marked point has wrong dimension")
        for g in self.generators:
            if g.max_order() != 0:
                raise ConfigError("presentation generators must have delta-order 0")
            val = g.subs({var_id(j, 0): self.point[j] for j in range(num_vars)})
            c = val.constant_term()
            mod = cfg.p ** min(precision, val.prec if val.prec is not None else precision)
            if int(c) % mod:
                raise InvalidPoint(f"marked point does not satisfy {g!r}")

    def point_delta_ladder(self, j: int, depth: int) -> list[PadicInt]:
        """delta-iterates of the j-th coordinate of the marked point."""
        out = [self.point[j]]
        for _ in range(depth):
            out.append(out[-1].fermat_delta())
        return out


class JetPresentation:
    """J_n A = R[x, x', ..., x^(n)] / (I, delta I, ..., delta^n I)."""

    def __init__(self, base: AffinePresentation, level: int, relations):
        self.base = base
        self.level = level
        self.relations = relations

    def to_json(self):
        return {
            "vars": self.base.d,
            "level": self.level,
            "relations": [str(r) for r in self.relations],
        }


class KernelPresentation:
    """N_{[m]n} A on generators x^(m+1)..x^(m+n), relations i* delta^{m+j} I."""

    def __init__(self, base, m, n, ring, relations, witt_images, ghost_precision):
        self.base = base
        self.m = m
        self.n = n
        self.ring = ring
        self.relations = relations
        self.witt_images = witt_images
        self.ghost_precision = ghost_precision

    def to_json(self):
        return {
            "vars": self.base.d,
            "shift": self.m,
            "level": self.n,
            "relations": [str(r) for r in self.relations],
        }


def build_jet(A: AffinePresentation, n: int) -> JetPresentation:
    """Relations are the delta-iterates of the generators, order by order."""
    if n < 0:
        raise ConfigError("level must be >= 0")
    relations = []
    for g in A.generators:
        ladder = [g]
        for _ in range(n):
            ladder.append(ladder[-1].delta())
        relations.extend(ladder)
    return JetPresentation(A, n, relations)


def _rename_block(poly: DPoly, block: int, ring: DPolyRing) -> DPoly:
    """Move a one-generator delta-polynomial onto generator `block`."""
    mapping = {}
    for v in poly.variables():
        g, o = var_parts(v)
        if g != 0:
            raise ConfigError("expected a one-generator polynomial")
        mapping[v] = ring.var(var_id(block, o))
    return poly.subs(mapping, ring=ring)


def kernel_witt_images(A: AffinePresentation, m: int, depth: int):
    """Witt coordinates G_1..G_depth of each relation at the kernel point.

    The universal kernel point sends coordinate block b to the shifted
    Witt vector (head = delta-expansion of c_b, tail = Witt coordinates of
    the kernel generators); ghost slot m+k of block b collapses to

        c_b + p^{m+1} t_0^{q^{k-1}} + p^{m+2} t_1^{q^{k-2}} + ...

    and G_j is the exact triangular unghost with zero head.
    """
    cfg = A.cfg
    p, q = cfg.p, cfg.q
    K = A.ring
    cc = coord_change(cfg, max(depth - 1, 0))
    t_exprs = {
        b: [_rename_block(cc.w2d[k], b, K) for k in range(depth)]
        for b in range(A.d)
    }
    ghost_slots = []
    for k in range(1, depth + 1):
        slot = []
        for b in range(A.d):
            acc = K.const(A.point[b])
            for kp in range(k):
                acc = acc + p ** (m + 1 + kp) * t_exprs[b][kp] ** (q ** (k - 1 - kp))
            slot.append(acc)
        ghost_slots.append(slot)

    all_images = []
    for g in A.generators:
        images: list[DPoly] = []
        ladders: list[list[DPoly]] = []
        for k in range(1, depth + 1):
            Fk = g.subs(
                {var_id(b, 0): ghost_slots[k - 1][b] for b in range(A.d)}, ring=K
            )
            acc = Fk
            for i in range(1, k):
                ladder = ladders[i - 1]
                while len(ladder) <= k - i:
                    ladder.append(ladder[-1] ** q)
                acc = acc - p ** (m + i) * ladder[k - i]
            try:
                acc = acc.exact_div_p(m + k)
            except NotDivisible as exc:
                raise InternalInvariantError(
                    f"kernel unghost failed at slot {m + k}: {exc}"
                ) from None
            images.append(acc)
            ladders.append([acc])
        all_images.append(images)
    return all_images


def build_kernel(A: AffinePresentation, m: int, n: int) -> KernelPresentation:
    """Relation j is i* delta^{m+j} g, expressed in the kernel coordinates.

    The ambient delta-iterate is recovered from the Witt images through
    the universal delta-to-Witt change; the head slots vanish because the
    marked point satisfies the generators.
    """
    if m < 0 or n < 0:
        raise ConfigError("need m >= 0 and n >= 0")
    if A.precision < m + n:
        raise InsufficientPrecision(
            f"kernel to level {n} at shift {m} needs precision >= {m + n}"
        )
    K = A.ring
    witt_images = kernel_witt_images(A, m, n)
    cc = coord_change(A.cfg, m + n) if n > 0 else None
    relations = []
    for images in witt_images:
        for j in range(1, n + 1):
            mapping = {var_id(i, 0): K.zero() for i in range(m + 1)}
            for i in range(1, j + 1):
                mapping[var_id(m + i, 0)] = images[i - 1]
            relations.append(cc.d2w[m + j].subs(mapping, ring=K))
    return KernelPresentation(A, m, n, K, relations, witt_images, A.precision)


def i_star_direct(A: AffinePresentation, m: int, element: DPoly, order: int) -> DPoly:
    """Oracle route: expand delta^order of an ambient element, then push it
    through i* variable by variable.

    Ambient variable x_b^(j) maps to delta^j(c_b) for j <= m and to the
    delta-to-Witt expression evaluated at (head expansion of c_b, kernel
    Witt coordinates) for j > m.  Slow: materialises the ambient iterate.
    """
    amb = element
    for _ in range(order):
        amb = amb.delta()
    K = A.ring
    cc_amb = coord_change(A.cfg, max(order, 1))
    cc_ker = coord_change(A.cfg, max(order, 1))
    mapping = {}
    for b in range(A.d):
        ladder = A.point_delta_ladder(b, m)
        head = _exp_delta_coords(A, b, m)
        t_exprs = [_rename_block(cc_ker.w2d[k], b, K) for k in range(max(order - m, 1))]
        for j in range(order + 1):
            if j <= m:
                mapping[var_id(b, j)] = K.const(ladder[j])
            else:
                wmap = {}
                for i in range(j + 1):
                    if i <= m:
                        wmap[var_id(i, 0)] = K.const(head[i])
                    else:
                        wmap[var_id(i, 0)] = t_exprs[i - m - 1]
                mapping[var_id(b, j)] = cc_amb.d2w[j].subs(wmap, ring=K)
    return amb.subs(mapping, ring=K)


def _exp_delta_coords(A: AffinePresentation, b: int, m: int) -> list[PadicInt]:
    """Witt coordinates of the canonical expansion of the marked value."""
    from .rings import PadicCoeff
    from .witt import exp_delta

    ops = PadicCoeff(A.cfg, A.point[b].precision)
    return list(exp_delta(A.point[b], m, ops).coords)


# -- the kernel-jet isomorphism certificates ---------------------------------


class IsoLevelReport:
    __slots__ = ("k", "witness", "witness_ok", "reverse_ok", "precision", "terms")

    def __init__(self, k, witness, witness_ok, reverse_ok, precision, terms):
        self.k = k
        self.witness = witness
        self.witness_ok = witness_ok
        self.reverse_ok = reverse_ok
        self.precision = precision
        self.terms = terms

    def __repr__(self):
        status = "ok" if (self.witness_ok and self.reverse_ok) else "FAILED"
        return f"IsoLevelReport(k={self.k}, {status}, terms={self.terms})"


class IsoReport:
    def __init__(self, m, n, levels, closed_form_ok):
        self.m = m
        self.n = n
        self.levels = levels
        self.closed_form_ok = closed_form_ok

    @property
    def ok(self):
        return self.closed_form_ok and all(
            lv.witness_ok and lv.reverse_ok for lv in self.levels
        )

    def __repr__(self):
        return f"IsoReport(m={self.m}, n={self.n}, ok={self.ok})"


def delta_del_witnesses(cfg: PrimeCfg, m: int, n: int, term_cap: int = 10**6):
    """Formal centered witnesses H_1..H_n with

        Delta^k beta_1 - beta_{k+1} = H_k(beta_1, ..., beta_k),

    where beta_j = i* delta^{m+j} of a relation all of whose lower
    delta-iterates vanish at the marked point.  Built in the free
    delta-ring on slots tau_1..tau_n; generator j-1 stands for beta_j.
    """
    if not cfg.e_bound_ok:
        raise UnsupportedPrime("p >= 3 required")
    p, q = cfg.p, cfg.q
    S = DPolyRing(cfg, ngens=n + 1, term_cap=term_cap)
    tau = [None] + [S.gen(j - 1, 0) for j in range(1, n + 2)]
    P_m = phi_del_polynomial(cfg, m + 1, term_cap) if m >= 0 else None
    P_m1 = phi_del_polynomial(cfg, m + 2, term_cap)

    witnesses: list[DPoly] = [S.zero()]  # index 0 unused (H_0 = 0)
    delta_beta: dict[int, DPoly] = {}

    def elim_all(poly: DPoly) -> DPoly:
        while True:
            order1 = [v for v in poly.variables() if var_parts(v)[1] == 1]
            if not order1:
                return poly
            mapping = {v: delta_beta[var_parts(v)[0] + 1] for v in order1}
            poly = poly.subs(mapping)

    def slot_pattern(P: DPoly, level: int) -> DPoly:
        # P's slot of delta-order o carries i* delta^{level-1+o} b,
        # which vanishes when level-1+o <= m
        mapping = {}
        for v in P.variables():
            _, o = var_parts(v)
            idx = level - 1 + o
            mapping[v] = S.zero() if idx <= m else tau[idx - m]
        return P.subs(mapping)

    for k in range(1, n + 1):
        A_pat = slot_pattern(P_m, k)
        B_pat = slot_pattern(P_m1, k)
        dA = elim_all(A_pat.delta()) if not A_pat.is_zero() else S.zero()
        numerator = A_pat**q + p ** (m + 1) * tau[k] ** q + p * dA - B_pat
        try:
            E_k = numerator.exact_div_p(m + 2)
        except NotDivisible as exc:
            raise InternalInvariantError(
                f"key-relation correction not divisible by p^{m + 2} at k={k}: {exc}"
            ) from None
        W_prev = witnesses[k - 1]
        if W_prev.is_zero():
            W_k = -E_k
        else:
            W_k = elim_all(W_prev.delta()) + c_pi(S, tau[k], W_prev) - E_k
        witnesses.append(W_k)
        # Delta beta_k = tau_{k+1} - E_k in pure slots (the key relation)
        delta_beta[k] = tau[k + 1] - E_k
    return S, witnesses


def kernel_jet_iso_check(A: AffinePresentation, m: int, n: int,
                         term_cap: int = 10**6) -> IsoReport:
    """Certify N_{[m]n}A = J_{n-1}(N_{[m]1}A) generator by generator.

    For each level k <= n and each presentation generator, the centered
    witness H_k is constructed by the recursion and the identity
    Delta^k beta_1 - beta_{k+1} = H_k(beta) is re-expanded exactly in the
    kernel ring; the reverse-direction certificate (beta_{k+1} written as
    a centered combination of the structural-delta iterates) is expanded
    as well.  The affine-space closed form of the iterated lateral
    Frobenius is checked against the shifted-Witt recurrence.
    """
    if n < 1:
        raise ConfigError("need n >= 1")
    S, witnesses = delta_del_witnesses(A.cfg, m, n, term_cap)
    kp = build_kernel(A, m, n + 1)
    K = A.ring

    # reverse certificates: tau_j rewritten in the Delta-iterate basis
    zexpr: dict[int, DPoly] = {1: S.gen(0, 0)}
    for j in range(1, n + 1):
        zmap = {var_id(i - 1, 0): zexpr[i] for i in range(1, j + 1)}
        zexpr[j + 1] = S.gen(j, 0) - witnesses[j].subs(zmap)

    levels = []
    per_gen = n + 1
    for gi in range(len(A.generators)):
        betas = [None] + kp.relations[gi * per_gen : (gi + 1) * per_gen]
        delta_iter = [betas[1]]
        for k in range(1, n + 1):
            delta_iter.append(delta_iter[-1].delta())
            lhs = delta_iter[k] - betas[k + 1]
            smap = {var_id(j - 1, 0): betas[j] for j in range(1, k + 1)}
            rhs = witnesses[k].subs(smap, ring=K)
            diff = lhs - rhs
            witness_ok = diff.is_zero() and witnesses[k].constant_term() == 0
            zmap = {var_id(j - 1, 0): delta_iter[j - 1] for j in range(1, k + 2)}
            reverse_ok = (zexpr[k + 1].subs(zmap, ring=K) - betas[k + 1]).is_zero()
            prec = min(
                x.prec for x in (lhs, rhs) if x.prec is not None
            ) if (lhs.prec is not None or rhs.prec is not None) else None
            levels.append(
                IsoLevelReport(
                    k,
                    CenteredWitness(witnesses[k], smap, f"Delta-del k={k}"),
                    witness_ok,
                    reverse_ok,
                    prec,
                    max(lhs.num_terms(), rhs.num_terms()),
                )
            )

    closed_ok = affine_closed_form_check(A.cfg, m, min(n, 3))
    return IsoReport(m, n, levels, closed_ok)


def affine_closed_form_check(cfg: PrimeCfg, m: int, imax: int) -> bool:
    """Iterated lateral Frobenius on the affine-space kernel point equals
    x_{m+1}^{q^{i-1}} + p x_{m+2}^{q^{i-2}} + ... + p^{i-1} x_{m+i}."""
    from .rings import DPolyCoeff
    from .shifted import ShiftedWitt, lateral_frobenius

    R = DPolyRing(cfg, ngens=m + 1 + imax)
    ops = DPolyCoeff(R)
    s = ShiftedWitt(
        m,
        [R.zero()] * (m + 1),
        [R.gen(m + 1 + j, 0) for j in range(imax)],
        ops,
    )
    p, q = cfg.p, cfg.q
    for i in range(1, imax + 1):
        target = R.zero()
        for k in range(i):
            target = target + p**k * R.gen(m + 1 + k, 0) ** (q ** (i - 1 - k))
        if not (s.tail[0] - target).is_zero():
            return False
        if i < imax:
            s = lateral_frobenius(s)
    return True


def formal_group_kernel_shape(d: int, n: int, cfg: PrimeCfg) -> dict:
    """Kernel of J^n G -> G for a smooth commutative formal group of
    dimension d: a product of d Witt-vector groups of length n."""
    if not cfg.e_bound_ok:
        raise UnsupportedPrime("requires p >= 3")
    if n < 1 or d < 1:
        raise ConfigError("need d >= 1 and n >= 1")
    return {
        "factors": d,
        "witt_length": n,
        "coordinates": d * n,
        "description": f"(W_{n - 1})^{d}",
    }
