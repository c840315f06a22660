"""The working ring Z[zeta_2n, 1/2] and its real subring.

A RingElem is a dyadic fraction num / 2^m over the cyclotomic integers,
kept normalized: either m = 0 or some coefficient of num is odd.  The
normalization makes equality canonical and pins the denominator-exponent
arithmetic below.

The denominator exponent of a nonzero real element x is the unique r >= 0
with x = w / beta^r where w is an algebraic integer not divisible by beta,
beta = 2 for n = 2s (s odd) and beta = 2 cos(pi / 2^k) for n = 2^k s with
k >= 2.  Because beta^(2^(k-1)) = 2 * unit, a normalized numerator is never
divisible by beta^(2^(k-1)), so r = m * 2^(k-1) - t with t < 2^(k-1) found
by an iterated divisibility chain.
"""

from __future__ import annotations

import math

from .cyclo import Context, CycInt
from .errors import IntegrityError

__all__ = [
    "BetaConstant",
    "RingElem",
    "as_zeta_power",
    "beta_constant",
    "beta_exponent",
    "mu",
    "q_of",
]


class RingElem:
    """Element of Z[zeta_2n, 1/2] as a normalized fraction num / 2^m."""

    __slots__ = ("num", "m")

    def __init__(self, num: CycInt, m: int = 0):
        if m < 0:
            raise ValueError("denominator exponent must be nonnegative")
        if num.is_zero():
            m = 0
        else:
            while m > 0 and all(c % 2 == 0 for c in num.coeffs):
                num = CycInt(num.ctx, tuple(c // 2 for c in num.coeffs))
                m -= 1
        self.num = num
        self.m = m

    @property
    def ctx(self) -> Context:
        return self.num.ctx

    # -- factories ----------------------------------------------------------

    @classmethod
    def from_int(cls, ctx: Context, c: int) -> "RingElem":
        return cls(ctx.from_int(c))

    @classmethod
    def zeta(cls, ctx: Context, j: int) -> "RingElem":
        return cls(ctx.zeta(j))

    @classmethod
    def zero(cls, ctx: Context) -> "RingElem":
        return cls(ctx.zero())

    @classmethod
    def one(cls, ctx: Context) -> "RingElem":
        return cls(ctx.one())

    # -- predicates ----------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_integral(self) -> bool:
        return self.m == 0

    def as_int(self) -> int | None:
        if self.m != 0:
            return None
        return self.num.as_int()

    def is_real(self) -> bool:
        return self.num.conj() == self.num

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: "RingElem") -> "RingElem":
        if self.m >= other.m:
            hi, lo = self, other
        else:
            hi, lo = other, self
        scaled = lo.num * (1 << (hi.m - lo.m))
        return RingElem(hi.num + scaled, hi.m)

    def __sub__(self, other: "RingElem") -> "RingElem":
        return self + (-other)

    def __neg__(self) -> "RingElem":
        return RingElem(-self.num, self.m)

    def __mul__(self, other: "RingElem") -> "RingElem":
        return RingElem(self.num * other.num, self.m + other.m)

    def conj(self) -> "RingElem":
        return RingElem(self.num.conj(), self.m)

    def abs2(self) -> "RingElem":
        """x * conj(x); always an element of the real subring."""
        return self * self.conj()

    def times_zeta(self, j: int) -> "RingElem":
        return RingElem(self.num.times_zeta(j), self.m)

    def half(self) -> "RingElem":
        return RingElem(self.num, self.m + 1)

    # -- valuation -----------------------------------------------------------

    def valuation(self):
        """Valuation at the prime above 2; may be negative, inf for zero."""
        ctx = self.ctx
        v = self.num.valuation()
        if v is math.inf:
            return math.inf
        return v - self.m * ctx.ram_index

    # -- comparisons -----------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, RingElem)
            and self.m == other.m
            and self.num == other.num
        )

    def __hash__(self):
        return hash((self.num, self.m))

    def key(self):
        return (self.num.coeffs, self.m)

    def __repr__(self):
        if self.m == 0:
            return "RingElem(%r)" % (self.num,)
        return "RingElem(%r / 2^%d)" % (self.num, self.m)


def mu(x: RingElem, y: RingElem) -> int:
    """Complexity measure -min(v(x), v(y)) of a nonzero ring vector."""
    if x.is_zero() and y.is_zero():
        raise ValueError("mu is undefined on the zero vector")
    v = min(x.valuation(), y.valuation())
    if v is math.inf:
        raise IntegrityError("finite valuation expected")
    return -v


def q_of(a: int, ctx: Context) -> int:
    """Denominator exponent contributed by a pi*a/n rotation, 1 <= a < n/2.

    Equals 2^(k-1), except when n / gcd(a, n) is a power of two 2^j where
    it drops to 2^(k-1) - 2^(k-j).
    """
    n = ctx.n
    if not 1 <= a < n // 2:
        raise ValueError("a must satisfy 1 <= a < n/2, got %d" % a)
    k = ctx.k
    g = n // math.gcd(a, n)
    if g & (g - 1) == 0:
        j = g.bit_length() - 1
        if not 2 <= j <= k:
            raise IntegrityError("impossible power-of-two index")
        q = (1 << (k - 1)) - (1 << (k - j))
    else:
        q = 1 << (k - 1)
    if q <= 0:
        raise IntegrityError("q must be positive in the open angle range")
    return q


class BetaConstant:
    """The denominator base beta with precomputed divisibility helpers.

    gamma is the product of the nontrivial Galois conjugates of beta and
    bnorm = beta * gamma is its rational norm, so dividing by beta costs a
    single ring multiplication.  unit is beta^(2^(k-1)) / 2, a unit that
    converts between powers of 2 and powers of beta.
    """

    def __init__(self, ctx: Context):
        self.ctx = ctx
        self.k = ctx.k
        if ctx.k == 1:
            beta = ctx.from_int(2)
        else:
            step = ctx.order >> (ctx.k + 1)  # zeta^step has order 2^(k+1)
            beta = ctx.zeta(step) + ctx.zeta(-step)
        self.beta = beta
        gamma = ctx.one()
        for t in ctx.galois_exponents[1:]:
            gamma = gamma * beta.galois(t)
        self.gamma = gamma
        bnorm = (beta * gamma).as_int()
        if bnorm is None or bnorm == 0:
            raise IntegrityError("norm of beta is not a nonzero integer")
        self.bnorm = bnorm
        pw = beta
        for _ in range(self.k - 1):
            pw = pw * pw
        unit = CycInt(ctx, tuple(c // 2 for c in pw.coeffs))
        if any(c % 2 for c in pw.coeffs) or abs(unit.norm()) != 1:
            raise IntegrityError("beta^(2^(k-1)) / 2 is not a unit")
        self.unit = unit
        self._unit_pows: dict[int, CycInt] = {0: ctx.one(), 1: unit}
        self.q_table = {a: q_of(a, ctx) for a in range(1, ctx.n // 2)}

    def beta_reduce(self, num: CycInt) -> tuple[int, CycInt]:
        """Largest t with beta^t | num, together with num / beta^t."""
        if num.is_zero():
            raise ValueError("beta_reduce of zero")
        t = 0
        if self.k == 1:
            while all(c % 2 == 0 for c in num.coeffs):
                num = CycInt(num.ctx, tuple(c // 2 for c in num.coeffs))
                t += 1
            return t, num
        while True:
            prod = num * self.gamma
            if all(c % self.bnorm == 0 for c in prod.coeffs):
                num = CycInt(num.ctx, tuple(c // self.bnorm for c in prod.coeffs))
                t += 1
            else:
                return t, num

    def unit_pow(self, m: int) -> CycInt:
        cached = self._unit_pows.get(m)
        if cached is None:
            cached = self.unit_pow(m // 2)
            cached = cached * cached
            if m % 2:
                cached = cached * self.unit
            self._unit_pows[m] = cached
        return cached


def beta_constant(ctx: Context) -> BetaConstant:
    bc = ctx._cache.get("beta")
    if bc is None:
        bc = ctx._cache["beta"] = BetaConstant(ctx)
    return bc


def _beta_exp_r(x: RingElem, bc: BetaConstant) -> int:
    """Denominator exponent only (no witness); shared with beta_exponent."""
    if x.is_zero():
        raise ValueError("beta exponent of zero")
    t, _ = bc.beta_reduce(x.num)
    r = x.m * (1 << (bc.k - 1)) - t
    return r if r > 0 else 0


def beta_exponent(x: RingElem, bc: BetaConstant) -> tuple[int, CycInt]:
    """Denominator exponent r and witness w = x * beta^r of a real element.

    For a normalized x = num / 2^m this is r = m * 2^(k-1) - t with t the
    largest power of beta dividing num, clamped at 0 for integral inputs.
    The witness is assembled as (num / beta^t) * unit^m, which equals
    x * beta^r exactly.
    """
    if x.is_zero():
        raise ValueError("beta exponent of zero")
    t, reduced = bc.beta_reduce(x.num)
    r = x.m * (1 << (bc.k - 1)) - t
    if r <= 0:
        return 0, x.num
    witness = reduced * bc.unit_pow(x.m)
    return r, witness


def as_zeta_power(x: RingElem) -> int | None:
    """j with x = zeta_2n^j exactly, or None (tested by enumeration)."""
    if x.m != 0:
        return None
    ctx = x.ctx
    for j in range(ctx.order):
        if x.num.coeffs == ctx.zeta_pow[j]:
            return j
    return None
