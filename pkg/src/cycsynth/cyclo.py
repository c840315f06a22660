"""Exact arithmetic in the cyclotomic ring Z[zeta_2n].

Elements are integer coefficient vectors in the power basis
1, zeta, ..., zeta^(d-1), d = phi(2n), always fully reduced modulo the
cyclotomic polynomial Phi_2n.  The power basis is an integral basis, so
the representation of each element is unique and all arithmetic is exact.
Coefficients are Python ints, i.e. arbitrary precision: synthesis of long
circuits grows them without bound and fixed-width integers are never safe.

The valuation layer (the exponent of the unique prime ideal above 2) is
only available for n in {2, 4, 6, 8, 12}, where that prime is unique and
the valuation can be read off the rational norm.
"""

from __future__ import annotations

import math
from functools import lru_cache
from itertools import accumulate

from .errors import IntegrityError

__all__ = [
    "Context",
    "CycInt",
    "cyclotomic_poly",
    "divides",
    "exact_quotient",
    "make_context",
    "two_adic",
]

VALUATION_NS = (2, 4, 6, 8, 12)


def two_adic(v: int) -> int:
    """Exponent of 2 in a nonzero integer."""
    if v == 0:
        raise ValueError("two_adic(0) is infinite")
    return (v & -v).bit_length() - 1


def _distinct_primes(m: int) -> list[int]:
    out = []
    p = 2
    while p * p <= m:
        if m % p == 0:
            out.append(p)
            while m % p == 0:
                m //= p
        p += 1 if p == 2 else 2
    if m > 1:
        out.append(m)
    return out


def _mul_binomial(p: list[int], e: int) -> list[int]:
    # p * (x^e - 1)
    out = [0] * e + p
    n = len(p)
    out[:n] = [a - b for a, b in zip(out[:n], p)]
    return out


def _div_binomial(p: list[int], e: int) -> list[int]:
    # exact quotient p / (x^e - 1); q[i] = q[i-e] - p[i], i.e. per residue
    # class mod e the quotient is a running prefix sum of -p.
    nq = len(p) - e
    q = [0] * nq
    for r in range(e):
        acc = list(accumulate(p[r::e]))
        cut = len(range(r, nq, e))
        q[r::e] = [-a for a in acc[:cut]]
        if any(acc[cut:]):
            raise IntegrityError("inexact polynomial division by x^%d - 1" % e)
    return q


@lru_cache(maxsize=None)
def _cyclotomic_squarefree(r: int) -> tuple[int, ...]:
    # Phi_r for squarefree r, as the Moebius product over the divisors of r:
    # multiply all (x^d - 1) with mu(r/d) = +1, then divide out the rest.
    if r == 1:
        return (-1, 1)
    primes = _distinct_primes(r)
    w = len(primes)
    divisors = [1]
    for p in primes:
        divisors += [d * p for d in divisors]
    plus = [d for d in divisors if (w - _count_primes(d, primes)) % 2 == 0]
    minus = [d for d in divisors if (w - _count_primes(d, primes)) % 2 == 1]
    poly = [1]
    for d in plus:
        poly = _mul_binomial(poly, d)
    for d in minus:
        poly = _div_binomial(poly, d)
    if poly[-1] != 1:
        raise IntegrityError("cyclotomic polynomial is not monic")
    return tuple(poly)


def _count_primes(d: int, primes: list[int]) -> int:
    return sum(1 for p in primes if d % p == 0)


def cyclotomic_poly(m: int) -> list[int]:
    """Exact coefficient vector of the m-th cyclotomic polynomial.

    Constant term first; the result is monic of degree phi(m).  Uses the
    Moebius product over squarefree divisors together with
    Phi_m(x) = Phi_rad(m)(x^(m/rad(m))).
    """
    if m < 1:
        raise ValueError("cyclotomic_poly requires m >= 1")
    rad = 1
    for p in _distinct_primes(m):
        rad *= p
    base = _cyclotomic_squarefree(rad) if m > 1 else (-1, 1)
    q = m // rad if m > 1 else 1
    if q == 1:
        return list(base)
    out = [0] * ((len(base) - 1) * q + 1)
    out[::q] = base
    return out


@lru_cache(maxsize=None)
def make_context(n: int) -> "Context":
    """Build (and cache) the arithmetic context for gate-set parameter n."""
    return Context(n)


class Context:
    """Shared constants for Z[zeta_2n]: cyclotomic polynomial, power-basis
    reduction table, Galois exponents and the 2-splitting data n = 2^k s."""

    def __init__(self, n: int):
        if not isinstance(n, int) or n < 2 or n % 2 != 0:
            raise ValueError("n must be a positive even integer, got %r" % (n,))
        self.n = n
        self.order = 2 * n
        self.phi_poly = tuple(cyclotomic_poly(self.order))
        self.degree = len(self.phi_poly) - 1
        self.k = two_adic(n)
        self.s = n >> self.k
        self.f = _mult_order_two(self.s)
        self.galois_exponents = tuple(
            t for t in range(1, self.order) if math.gcd(t, self.order) == 1
        )
        if len(self.galois_exponents) != self.degree:
            raise IntegrityError("Galois group size does not match field degree")
        # zeta^m in the power basis, for every m in [0, 2n); doubles as the
        # reduction table for products (their degree stays below 2n).
        d = self.degree
        red = [-c for c in self.phi_poly[:d]]
        rows = []
        cur = [1] + [0] * (d - 1)
        for _ in range(self.order):
            rows.append(tuple(cur))
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                for j, rj in enumerate(red):
                    if rj:
                        cur[j] += top * rj
        self.zeta_pow = tuple(rows)
        self._phi_s = _euler_phi(self.s)
        # The prime above 2 is unique exactly when the residue degree f
        # exhausts phi(s); then v(2) = degree/f.
        self.unique_prime_above_two = self.f == self._phi_s
        self.ram_index = self.degree // self.f if self.unique_prime_above_two else None
        self.supports_valuation = n in VALUATION_NS
        if self.supports_valuation and not self.unique_prime_above_two:
            raise IntegrityError("valuation layer enabled without unique prime")
        self._cache: dict = {}

    # -- element factories -------------------------------------------------

    def zero(self) -> "CycInt":
        return CycInt(self, (0,) * self.degree)

    def one(self) -> "CycInt":
        return self.from_int(1)

    def from_int(self, c: int) -> "CycInt":
        return CycInt(self, (c,) + (0,) * (self.degree - 1))

    def zeta(self, j: int = 1) -> "CycInt":
        return CycInt(self, self.zeta_pow[j % self.order])

    def from_coeffs(self, coeffs) -> "CycInt":
        coeffs = tuple(coeffs)
        if len(coeffs) != self.degree:
            raise ValueError(
                "coefficient vector must have length %d, got %d"
                % (self.degree, len(coeffs))
            )
        if not all(isinstance(c, int) for c in coeffs):
            raise ValueError("coefficients must be integers")
        return CycInt(self, coeffs)

    def __repr__(self):
        return "Context(n=%d)" % self.n


def _euler_phi(m: int) -> int:
    out = m
    for p in _distinct_primes(m):
        out -= out // p
    return out


def _mult_order_two(s: int) -> int:
    """Multiplicative order of 2 modulo odd s (1 when s = 1)."""
    if s == 1:
        return 1
    t, v = 1, 2 % s
    while v != 1:
        v = (v * 2) % s
        t += 1
    return t


def _check_same_context(a: "CycInt", b: "CycInt") -> None:
    if a.ctx.n != b.ctx.n:
        raise ValueError(
            "mixed contexts: n=%d vs n=%d" % (a.ctx.n, b.ctx.n)
        )


class CycInt:
    """An element of Z[zeta_2n] as a reduced power-basis coefficient vector."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: Context, coeffs):
        self.ctx = ctx
        self.coeffs = tuple(coeffs)

    # -- predicates ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def as_int(self) -> int | None:
        """The rational integer value, or None if not rational."""
        if any(self.coeffs[1:]):
            return None
        return self.coeffs[0]

    # -- ring operations -----------------------------------------------------

    def __add__(self, other: "CycInt") -> "CycInt":
        _check_same_context(self, other)
        return CycInt(self.ctx, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "CycInt") -> "CycInt":
        _check_same_context(self, other)
        return CycInt(self.ctx, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "CycInt":
        return CycInt(self.ctx, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, int):
            return CycInt(self.ctx, tuple(other * a for a in self.coeffs))
        _check_same_context(self, other)
        ctx = self.ctx
        d = ctx.degree
        a, b = self.coeffs, other.coeffs
        conv = [0] * (2 * d - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        conv[i + j] += ai * bj
        out = conv[:d]
        zp = ctx.zeta_pow
        for e in range(d, 2 * d - 1):
            c = conv[e]
            if c:
                for j, rj in enumerate(zp[e]):
                    if rj:
                        out[j] += c * rj
        return CycInt(ctx, tuple(out))

    __rmul__ = __mul__

    def times_zeta(self, j: int) -> "CycInt":
        """Product with zeta^j (a sparse basis rotation, cheaper than mul)."""
        ctx = self.ctx
        j %= ctx.order
        if j == 0:
            return self
        d = ctx.degree
        zp = ctx.zeta_pow
        out = [0] * d
        for i, c in enumerate(self.coeffs):
            if c:
                for t, rt in enumerate(zp[(i + j) % ctx.order]):
                    if rt:
                        out[t] += c * rt
        return CycInt(ctx, tuple(out))

    # -- Galois action and derived maps ---------------------------------------

    def galois(self, t: int) -> "CycInt":
        """Image under zeta -> zeta^t for t coprime to 2n."""
        ctx = self.ctx
        if math.gcd(t, ctx.order) != 1:
            raise ValueError("t=%d is not coprime to %d" % (t, ctx.order))
        t %= ctx.order
        d = ctx.degree
        zp = ctx.zeta_pow
        out = [0] * d
        for j, c in enumerate(self.coeffs):
            if c:
                for i, ri in enumerate(zp[(j * t) % ctx.order]):
                    if ri:
                        out[i] += c * ri
        return CycInt(ctx, tuple(out))

    def conj(self) -> "CycInt":
        """Complex conjugate (the Galois map t = 2n - 1)."""
        return self.galois(self.ctx.order - 1)

    def norm(self) -> int:
        """Product of all Galois conjugates; a rational integer."""
        if self.is_zero():
            return 0
        acc = self
        for t in self.ctx.galois_exponents[1:]:
            acc = acc * self.galois(t)
        value = acc.as_int()
        if value is None:
            raise IntegrityError("norm did not reduce to a rational integer")
        return value

    def is_coprime_to_two(self) -> bool:
        """True iff the norm is odd (no prime above 2 divides the element)."""
        if self.is_zero():
            raise ValueError("zero has no coprimality class")
        return self.norm() % 2 != 0

    def mod2(self) -> "CycInt":
        """Coefficientwise residue in {0, 1}, as an element of the ring."""
        return CycInt(self.ctx, tuple(c & 1 for c in self.coeffs))

    def valuation(self):
        """Exponent of the unique prime above 2 (n in {2,4,6,8,12} only).

        Computed as v_2(|norm|) / f, which is exact because a single prime
        lies above 2 for the supported n.  Returns math.inf for zero.
        """
        ctx = self.ctx
        if not ctx.supports_valuation:
            raise ValueError(
                "valuation above 2 is only supported for n in %r" % (VALUATION_NS,)
            )
        if self.is_zero():
            return math.inf
        v2 = two_adic(abs(self.norm()))
        if v2 % ctx.f != 0:
            raise IntegrityError("norm 2-exponent is not a multiple of f")
        return v2 // ctx.f

    # -- comparisons / hashing -------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, CycInt)
            and self.ctx.n == other.ctx.n
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.ctx.n, self.coeffs))

    def __repr__(self):
        terms = []
        for j, c in enumerate(self.coeffs):
            if c:
                if j == 0:
                    terms.append(str(c))
                else:
                    terms.append("%d*z^%d" % (c, j))
        return "CycInt(%s)" % (" + ".join(terms) if terms else "0")


def _conjugate_product(y: CycInt) -> CycInt:
    acc = y.ctx.one()
    for t in y.ctx.galois_exponents[1:]:
        acc = acc * y.galois(t)
    return acc


def divides(y: CycInt, x: CycInt) -> bool:
    """True iff x / y is an algebraic integer.

    Multiplies x by the product gamma of the nontrivial conjugates of y;
    then x / y = x*gamma / (y*gamma) where y*gamma is the rational norm,
    so the answer is a coefficientwise integer-divisibility test.
    """
    if y.is_zero():
        raise ValueError("division by zero")
    if x.is_zero():
        return True
    gamma = _conjugate_product(y)
    b = (y * gamma).as_int()
    if b is None:
        raise IntegrityError("y * gamma did not reduce to a rational integer")
    xg = x * gamma
    return all(c % b == 0 for c in xg.coeffs)


def exact_quotient(x: CycInt, y: CycInt) -> CycInt:
    """x / y, which must be an algebraic integer (ValueError otherwise)."""
    if y.is_zero():
        raise ValueError("division by zero")
    gamma = _conjugate_product(y)
    b = (y * gamma).as_int()
    if b is None:
        raise IntegrityError("y * gamma did not reduce to a rational integer")
    xg = x * gamma
    if not all(c % b == 0 for c in xg.coeffs):
        raise ValueError("quotient is not an algebraic integer")
    return CycInt(x.ctx, tuple(c // b for c in xg.coeffs))
