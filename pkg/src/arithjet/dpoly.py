"""Sparse delta-polynomial arithmetic.

`DPoly` is a sparse multivariate polynomial in variables x_j^(i) (generator
j, delta-order i) over exact integers or over Z/p^prec with tracked
precision.  The structural derivation sends x_j^(i) to x_j^(i+1) and acts on
scalar coefficients by the Fermat quotient; it is computed through the
Frobenius lift as (phi(f) - f^q)/p, which keeps both effects in one code
path.

Monomials are flat tuples (var0, exp0, var1, exp1, ...) sorted by variable
id; variable id = gen * ORDER_STRIDE + order.

Large products of polynomials with modular coefficients go through a
Kronecker-substitution fast path: exponent vectors are packed into one
mixed-radix index, the polynomials become single big integers, and GMP
does the convolution.  Slot widths are chosen so that no carry can cross
slots, which keeps the result exact.
"""

from __future__ import annotations

import numpy as np

from .errors import ConfigError, InsufficientPrecision, NotDivisible, TermBudgetExceeded
from .padic import PadicInt, PrimeCfg

ORDER_STRIDE = 64

DEFAULT_TERM_CAP = 10**6

# dict-multiplication is preferred below this many coefficient products
_FAST_MUL_PAIRS = 200_000
# mixed-radix index space limit for the packed representation
_FAST_MUL_SLOTS = 1 << 24


def var_id(gen: int, order: int) -> int:
    if order >= ORDER_STRIDE:
        raise ConfigError(f"delta-order {order} exceeds engine limit")
    return gen * ORDER_STRIDE + order


def var_parts(v: int) -> tuple[int, int]:
    return divmod(v, ORDER_STRIDE)


def _merge_mono(a: tuple, b: tuple) -> tuple:
    """Merge two sorted flat (var, exp, ...) tuples, adding exponents."""
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    la, lb = len(a), len(b)
    while i < la and j < lb:
        va, vb = a[i], b[j]
        if va == vb:
            out.append(va)
            out.append(a[i + 1] + b[j + 1])
            i += 2
            j += 2
        elif va < vb:
            out.append(va)
            out.append(a[i + 1])
            i += 2
        else:
            out.append(vb)
            out.append(b[j + 1])
            j += 2
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def _mono_degree(m: tuple) -> int:
    return sum(m[1::2])


class DPolyRing:
    """Free delta-polynomial ring R{x_1,...,x_d} for a fixed prime setup."""

    def __init__(self, cfg: PrimeCfg, ngens: int = 1, term_cap: int = DEFAULT_TERM_CAP):
        self.cfg = cfg
        self.ngens = ngens
        self.term_cap = term_cap

    def __eq__(self, other):
        return (
            isinstance(other, DPolyRing)
            and self.cfg == other.cfg
            and self.ngens == other.ngens
        )

    def __hash__(self):
        return hash((self.cfg, self.ngens))

    def __repr__(self):
        return f"DPolyRing(p={self.cfg.p}, q={self.cfg.q}, ngens={self.ngens})"

    def zero(self, prec=None) -> "DPoly":
        return DPoly(self, {}, prec)

    def const(self, c, prec=None) -> "DPoly":
        if isinstance(c, PadicInt):
            if c.cfg != self.cfg:
                raise ConfigError("mixed primes")
            prec = c.precision if prec is None else min(prec, c.precision)
            c = c.residue
        if c == 0 and prec is None:
            return DPoly(self, {}, None)
        return DPoly(self, {(): c}, prec)

    def gen(self, j: int = 0, order: int = 0, prec=None) -> "DPoly":
        if not 0 <= j < self.ngens:
            raise ConfigError(f"generator index {j} out of range")
        return DPoly(self, {(var_id(j, order), 1): 1}, prec)

    def var(self, v: int, prec=None) -> "DPoly":
        return DPoly(self, {(v, 1): 1}, prec)


class DPoly:
    """Element of a DPolyRing.  Immutable by convention."""

    __slots__ = ("ring", "terms", "prec")

    def __init__(self, ring: DPolyRing, terms: dict, prec=None):
        self.ring = ring
        self.prec = prec
        if prec is not None:
            mod = ring.cfg.p**prec
            terms = {m: c % mod for m, c in terms.items()}
        self.terms = {m: c for m, c in terms.items() if c != 0}
        if len(self.terms) > ring.term_cap:
            raise TermBudgetExceeded(
                f"{len(self.terms)} terms exceeds cap {ring.term_cap}"
            )

    # -- bookkeeping -----------------------------------------------------

    def _join_prec(self, other) -> int | None:
        a, b = self.prec, other.prec
        if a is None:
            return b
        if b is None:
            return a
        return min(a, b)

    def is_zero(self) -> bool:
        return not self.terms

    def num_terms(self) -> int:
        return len(self.terms)

    def degree(self) -> int:
        return max((_mono_degree(m) for m in self.terms), default=0)

    def variables(self) -> set:
        vs = set()
        for m in self.terms:
            vs.update(m[0::2])
        return vs

    def max_order(self) -> int:
        return max((var_parts(v)[1] for m in self.terms for v in m[0::2]), default=0)

    def constant_term(self):
        return self.terms.get((), 0)

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, int):
            other = self.ring.const(other)
        if other.ring != self.ring:
            raise ConfigError("mixed rings")
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return DPoly(self.ring, out, self._join_prec(other))

    __radd__ = __add__

    def __neg__(self):
        return DPoly(self.ring, {m: -c for m, c in self.terms.items()}, self.prec)

    def __sub__(self, other):
        if isinstance(other, int):
            other = self.ring.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return self.ring.const(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return DPoly(self.ring, {}, self.prec)
            return DPoly(
                self.ring, {m: c * other for m, c in self.terms.items()}, self.prec
            )
        if isinstance(other, PadicInt):
            return self * self.ring.const(other)
        if other.ring != self.ring:
            raise ConfigError("mixed rings")
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        prec = self._join_prec(other)
        mod = None if prec is None else self.ring.cfg.p**prec
        if mod is not None and len(a) * len(b) >= _FAST_MUL_PAIRS:
            fast = _kronecker_mul(self.ring, a, b, mod, prec)
            if fast is not None:
                return fast
        cap = self.ring.term_cap
        out: dict = {}
        for ma, ca in a.items():
            for mb, cb in b.items():
                m = _merge_mono(ma, mb)
                s = out.get(m, 0) + ca * cb
                if s if mod is None else s % mod:
                    out[m] = s if mod is None else s % mod
                else:
                    out.pop(m, None)
            if len(out) > cap:
                raise TermBudgetExceeded(f"product exceeds term cap {cap}")
        return DPoly(self.ring, out, prec)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ConfigError("negative power of a polynomial")
        result = self.ring.const(1, self.prec)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.const(other)
        if not isinstance(other, DPoly) or other.ring != self.ring:
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        raise TypeError("DPoly is compared structurally; not hashable")

    # -- p-divisions ------------------------------------------------------

    def exact_div_p(self, k: int = 1) -> "DPoly":
        """Divide every coefficient by p^k; raise NotDivisible if inexact.

        Over Z/p^prec the result is known mod p^(prec-k).
        """
        if k == 0:
            return self
        p = self.ring.cfg.p
        pk = p**k
        if self.prec is not None and self.prec < k:
            raise InsufficientPrecision(
                f"dividing by p^{k} with only {self.prec} digits"
            )
        out = {}
        for m, c in self.terms.items():
            if c % pk:
                raise NotDivisible(f"coefficient {c} of {m} not divisible by p^{k}")
            out[m] = c // pk
        prec = None if self.prec is None else self.prec - k
        return DPoly(self.ring, out, prec)

    def reduce_prec(self, prec: int) -> "DPoly":
        if self.prec is not None and prec > self.prec:
            raise InsufficientPrecision("cannot raise precision")
        return DPoly(self.ring, self.terms, prec)

    # -- substitution and delta structure ----------------------------------

    def subs(self, mapping: dict, ring: DPolyRing | None = None, prec="keep") -> "DPoly":
        """Substitute polynomials (or ints/PadicInts) for variable ids.

        Unmapped variables pass through unchanged.  `mapping` keys are
        variable ids; values live in the target ring.
        """
        target = ring if ring is not None else self.ring
        if prec == "keep":
            prec = self.prec
        norm = {}
        for v, val in mapping.items():
            if isinstance(val, PadicInt):
                val = target.const(val)
            elif isinstance(val, int):
                val = target.const(val)
            norm[v] = val
        pow_cache: dict = {}

        def vpow(v, e):
            key = (v, e)
            got = pow_cache.get(key)
            if got is None:
                got = norm[v] ** e
                pow_cache[key] = got
            return got

        acc = target.zero(prec)
        for m, c in self.terms.items():
            piece = target.const(c, prec)
            for v, e in zip(m[0::2], m[1::2]):
                if v in norm:
                    piece = piece * vpow(v, e)
                else:
                    piece = piece * DPoly(target, {(v, e): 1})
            acc = acc + piece
        return acc

    def frobenius(self) -> "DPoly":
        """phi(f): substitute x^(i) -> (x^(i))^q + p * x^(i+1); scalars fixed.

        Over Z_p scalars phi is the identity, so only variables move.
        """
        q = self.ring.cfg.q
        p = self.ring.cfg.p
        mapping = {}
        for v in self.variables():
            mapping[v] = self.ring.var(v) ** q + p * self.ring.var(v + 1)
        return self.subs(mapping)

    def delta(self) -> "DPoly":
        """Structural pi-derivation: (phi(f) - f^q) / p.

        Sends x_j^(i) to x_j^(i+1), integer constants to Fermat quotients,
        and satisfies both pi-derivation axioms exactly.  Costs one digit
        of coefficient precision when working mod p^prec.
        """
        q = self.ring.cfg.q
        num = self.frobenius() - self**q
        return num.exact_div_p()

    # -- presentation -------------------------------------------------------

    @staticmethod
    def _var_str(v: int) -> str:
        g, o = var_parts(v)
        return f"x{g}" if o == 0 else f"x{g}^({o})"

    def sorted_terms(self):
        def key(item):
            m, _ = item
            return (_mono_degree(m), m)

        return sorted(self.terms.items(), key=key)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            factors = [] if c != 1 or not m else []
            if c != 1 or not m:
                factors.append(str(c))
            for v, e in zip(m[0::2], m[1::2]):
                s = self._var_str(v)
                factors.append(s if e == 1 else f"{s}^{e}")
            parts.append("*".join(factors))
        s = " + ".join(parts)
        return s if self.prec is None else f"({s}) + O(p^{self.prec})"

    def to_json(self) -> list:
        return [
            [str(c), [[*var_parts(v), e] for v, e in zip(m[0::2], m[1::2])]]
            for m, c in self.sorted_terms()
        ]

    @classmethod
    def from_json(cls, ring: DPolyRing, data: list, prec=None) -> "DPoly":
        terms = {}
        for coeff, mono in data:
            m = tuple(
                x
                for g, o, e in sorted(mono)
                for x in (var_id(g, o), e)
            )
            terms[m] = int(coeff)
        return cls(ring, terms, prec)


def c_pi(ring: DPolyRing, f: DPoly, g: DPoly) -> DPoly:
    """C_p(f, g) = (f^q + g^q - (f+g)^q)/p, the addition-defect polynomial."""
    q = ring.cfg.q
    return (f**q + g**q - (f + g) ** q).exact_div_p()


# -- Kronecker-substitution fast multiplication -----------------------------


def _degree_profile(terms: dict) -> dict:
    degs: dict = {}
    for m in terms:
        for v, e in zip(m[0::2], m[1::2]):
            if e > degs.get(v, 0):
                degs[v] = e
    return degs


def _pack_terms(terms: dict, strides: dict, nslots: int, width: int) -> int:
    idx = np.empty(len(terms), dtype=np.int64)
    if width == 64:
        val = np.empty(len(terms), dtype=np.uint64)
        for t, (m, c) in enumerate(terms.items()):
            k = 0
            for v, e in zip(m[0::2], m[1::2]):
                k += strides[v] * e
            idx[t] = k
            val[t] = c
        buf = np.zeros(nslots, dtype=np.uint64)
        buf[idx] = val
    else:  # width == 128: coefficients still fit one uint64 slot pair
        val = np.empty(len(terms), dtype=np.uint64)
        for t, (m, c) in enumerate(terms.items()):
            k = 0
            for v, e in zip(m[0::2], m[1::2]):
                k += strides[v] * e
            idx[t] = k
            val[t] = c
        buf = np.zeros(2 * nslots, dtype=np.uint64)
        buf[2 * idx] = val
    return int.from_bytes(buf.tobytes(), "little")


def _kronecker_mul(ring: DPolyRing, a: dict, b: dict, mod: int, prec):
    """Exact product via packed big-integer multiplication, or None.

    Requires modular (hence non-negative, bounded) coefficients.  The raw
    convolution coefficient bound decides the slot width; no carry can
    cross a slot, so unpacking recovers the exact convolution.
    """
    da, db = _degree_profile(a), _degree_profile(b)
    variables = sorted(set(da) | set(db))
    nslots = 1
    strides = {}
    for v in variables:
        strides[v] = nslots
        nslots *= da.get(v, 0) + db.get(v, 0) + 1
        if nslots > _FAST_MUL_SLOTS:
            return None
    bound = (mod - 1) * (mod - 1) * min(len(a), len(b))
    if bound < (1 << 63):
        width = 64
    elif bound < (1 << 127) and mod - 1 < (1 << 63):
        width = 128
    else:
        return None

    prod = _pack_terms(a, strides, nslots, width) * _pack_terms(
        b, strides, nslots, width
    )
    nbytes = nslots * (width // 8)
    raw = prod.to_bytes(nbytes + 16, "little")[:nbytes]
    arr = np.frombuffer(raw, dtype=np.uint64)
    if width == 64:
        nz_mask = arr != 0
        raw_coeff = [int(c) for c in arr[nz_mask]]
        (nz,) = np.nonzero(nz_mask)
    else:
        lo, hi = arr[0::2], arr[1::2]
        nz_mask = (lo | hi) != 0
        (nz,) = np.nonzero(nz_mask)
        raw_coeff = [
            (int(h) << 64) | int(l) for h, l in zip(hi[nz_mask], lo[nz_mask])
        ]
    if len(nz) > ring.term_cap:
        raise TermBudgetExceeded(f"product exceeds term cap {ring.term_cap}")
    radix = [da.get(v, 0) + db.get(v, 0) + 1 for v in variables]
    out = {}
    for k, c in zip(nz.tolist(), raw_coeff):
        c %= mod
        if not c:
            continue
        mono = []
        for v, r in zip(variables, radix):
            k, e = divmod(k, r)
            if e:
                mono.append(v)
                mono.append(e)
        out[tuple(mono)] = c
    return DPoly(ring, out, prec)
