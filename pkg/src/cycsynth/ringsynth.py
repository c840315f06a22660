"""Ring-level synthesis: which unitaries over Z[zeta_2n, 1/2] are circuits.

For n in {2, 4, 6, 8, 12} every 2x2 unitary over the ring is synthesizable;
synthesize_ring() constructs a circuit by driving the first column down a
complexity measure (minus the minimum valuation of its entries) with
H0 U_z(pi k/n) steps, closing with an explicit base-case unitary and an
exact phase completion.

The phase condition -- is -1 a power of 2 modulo the odd part of n? --
decides whether every unit-modulus ring element is a root of unity, i.e.
whether the z-rotation subgroup of the ring unitaries collapses to the 2n
discrete rotations.  fn_census() measures how often that holds.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .cyclo import Context, CycInt, make_context, two_adic
from .errors import IntegrityError, NoPhaseMatchError, NoReducingKError
from .rings import RingElem, as_zeta_power, mu
from .su2 import GateSequence, UnitaryRn, eval_sequence, token_w

__all__ = [
    "ColumnRn",
    "base_case_column",
    "complete_unitary",
    "fn_census",
    "iter_census",
    "mu_threshold",
    "phase_condition",
    "phase_condition_witness",
    "reduce_column_step",
    "synthesize_ring",
    "verify_finite_lemma",
    "z_rotation_classify",
]

RING_EQUALITY_NS = (2, 4, 6, 8, 12)


# -- the phase condition and census -------------------------------------------


def _factorize(m: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= m:
        while m % p == 0:
            out[p] = out.get(p, 0) + 1
            m //= p
        p += 1 if p == 2 else 2
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


def _order_of_two(s: int, phi_factors: dict[int, int]) -> int:
    # Multiplicative order of 2 mod s from a factored group exponent.
    e = 1
    for p, a in phi_factors.items():
        e *= p**a
    for p in phi_factors:
        while e % p == 0 and pow(2, e // p, s) == 1:
            e //= p
    return e


def _phi(factors: dict[int, int]) -> int:
    out = 1
    for p, a in factors.items():
        out *= (p - 1) * p ** (a - 1)
    return out


def phase_condition_witness(n: int) -> tuple[bool, int, int | None]:
    """(condition, s, t) for n = 2^k s: t with 2^t = -1 (mod s), if any.

    In the cyclic group generated by 2 the only candidate square root of 1
    besides 1 itself is 2^(ord/2), so the condition holds iff the order is
    even and that power is -1 (vacuously for s = 1).
    """
    if n < 2 or n % 2:
        raise ValueError("n must be a positive even integer")
    s = n >> two_adic(n)
    if s == 1:
        return True, 1, 1
    fac = _factorize(s)
    phi_fac: dict[int, int] = {}
    for p, a in fac.items():
        for q, b in _factorize(p - 1).items():
            phi_fac[q] = phi_fac.get(q, 0) + b
        if a > 1:
            phi_fac[p] = phi_fac.get(p, 0) + a - 1
    ord2 = _order_of_two(s, phi_fac)
    if ord2 % 2 == 0 and pow(2, ord2 // 2, s) == s - 1:
        return True, s, ord2 // 2
    return False, s, None


def phase_condition(n: int) -> bool:
    """True iff some positive t has 2^t = -1 modulo the odd part of n."""
    return phase_condition_witness(n)[0]


def _spf_sieve(limit: int) -> list[int]:
    spf = list(range(limit + 1))
    for p in range(2, int(limit**0.5) + 1):
        if spf[p] == p:
            for q in range(p * p, limit + 1, p):
                if spf[q] == q:
                    spf[q] = p
    return spf


def _factorize_spf(m: int, spf: list[int]) -> dict[int, int]:
    out: dict[int, int] = {}
    while m > 1:
        p = spf[m]
        out[p] = out.get(p, 0) + 1
        m //= p
    return out


def iter_census(max_n: int, start_n: int = 2):
    """Yield (n, condition) for even n in [start_n, max_n], cheaply at scale.

    One smallest-prime-factor sieve serves all the order computations, and
    the per-odd-part verdict is memoized (the same s shows up for every
    n = 2^k s in range).
    """
    if max_n < 2 or max_n % 2:
        raise ValueError("census bound must be a positive even integer")
    if start_n < 2 or start_n % 2:
        raise ValueError("census start must be a positive even integer")
    spf = _spf_sieve(max(max_n >> 1, 2))
    verdict: dict[int, bool] = {1: True}
    for n in range(start_n, max_n + 1, 2):
        s = n >> two_adic(n)
        got = verdict.get(s)
        if got is None:
            fac = _factorize_spf(s, spf)
            phi_fac: dict[int, int] = {}
            for p, a in fac.items():
                for q, b in _factorize_spf(p - 1, spf).items():
                    phi_fac[q] = phi_fac.get(q, 0) + b
                if a > 1:
                    phi_fac[p] = phi_fac.get(p, 0) + a - 1
            ord2 = _order_of_two(s, phi_fac)
            got = ord2 % 2 == 0 and pow(2, ord2 // 2, s) == s - 1
            verdict[s] = got
        yield n, got


def fn_census(max_n: int) -> tuple[list[tuple[int, bool]], Fraction]:
    """All (n, condition) rows up to max_n with the exact fraction of hits."""
    rows = list(iter_census(max_n))
    hits = sum(1 for _, c in rows if c)
    return rows, Fraction(hits, len(rows))


# -- z-rotation subgroup --------------------------------------------------------


def z_rotation_classify(u: UnitaryRn) -> int | None:
    """j with u = U_z(j pi / n), or None if the phase is not a zeta power."""
    if not u.is_diagonal():
        raise ValueError("input must be a diagonal unitary")
    if u.rows[0][0] != RingElem.one(u.ctx):
        raise ValueError("input must have top-left entry 1")
    return as_zeta_power(u.rows[1][1])


# -- the finite mod-2 verification ------------------------------------------------


def verify_finite_lemma(n: int) -> bool:
    """Exhaustive residue check behind the column-reduction step.

    Enumerates the unit-valuation residues mod 2 up to rotation by roots of
    unity (orbit representative = lexicographically least coefficient
    vector) and confirms that every pair (a, b) with |a|^2 + |b|^2 even
    admits k in [1, 2n] making v(a + zeta^k b mod 2) exceed v(2)/2.
    """
    if n not in RING_EQUALITY_NS:
        raise ValueError("finite verification is defined for n in %r" % (RING_EQUALITY_NS,))
    ctx = make_context(n)
    d = ctx.degree
    vp2 = ctx.from_int(2).valuation()
    half_vp2 = vp2 // 2

    def orbit_rep(x: CycInt) -> tuple[int, ...]:
        return min(x.times_zeta(k).mod2().coeffs for k in range(1, ctx.order + 1))

    reps = set()
    for bits in product((0, 1), repeat=d):
        x = CycInt(ctx, bits)
        if x.is_zero():
            continue
        if x.valuation() == 0:
            reps.add(orbit_rep(x))
    sprime = [CycInt(ctx, r) for r in sorted(reps)]
    for a in sprime:
        aa = (a * a.conj()).mod2()
        for b in sprime:
            bb = (b * b.conj()).mod2()
            if not (aa + bb).mod2().is_zero():
                continue
            ok = any(
                (a + b.times_zeta(k)).mod2().valuation() > half_vp2
                for k in range(1, ctx.order + 1)
            )
            if not ok:
                return False
    return True


# -- column reduction ---------------------------------------------------------------


def mu_threshold(ctx: Context) -> int:
    """Base-case threshold: the valuation of 1 + i."""
    cached = ctx._cache.get("mu_n")
    if cached is None:
        one_plus_i = ctx.one() + ctx.zeta(ctx.n // 2)
        cached = ctx._cache["mu_n"] = one_plus_i.valuation()
    return cached


@dataclass(frozen=True)
class ColumnRn:
    """A normalized column (|x|^2 + |y|^2 = 1) over the ring."""

    x: RingElem
    y: RingElem

    def __post_init__(self):
        if self.x.abs2() + self.y.abs2() != RingElem.one(self.x.ctx):
            raise ValueError("column is not normalized")

    @property
    def ctx(self) -> Context:
        return self.x.ctx

    def measure(self) -> int:
        return mu(self.x, self.y)

    def apply_step(self, k: int) -> "ColumnRn":
        """The column H0 U_z(pi k / n) (x, y)^T."""
        ctx = self.ctx
        rotated = self.y.times_zeta(k)
        one_plus_i = RingElem(ctx.one() + ctx.zeta(ctx.n // 2), 1)  # (1+i)/2
        return ColumnRn(
            (self.x + rotated) * one_plus_i,
            (self.x - rotated) * one_plus_i,
        )


def reduce_column_step(col: ColumnRn) -> tuple[int, ColumnRn]:
    """One strictly measure-decreasing step H0 U_z(pi k/n), smallest such k."""
    ctx = col.ctx
    if ctx.n not in RING_EQUALITY_NS:
        raise ValueError("column reduction is defined for n in %r" % (RING_EQUALITY_NS,))
    m0 = col.measure()
    if m0 <= mu_threshold(ctx):
        raise ValueError("column is already at or below the base-case measure")
    for k in range(1, ctx.order + 1):
        cand = col.apply_step(k)
        if cand.measure() < m0:
            return k, cand
    raise NoReducingKError("no phase reduces the column measure")


def base_case_column(col: ColumnRn) -> tuple[UnitaryRn, GateSequence]:
    """A circuit unitary with the given low-measure column as first column.

    Scaling by 1 + i makes both entries integral with norm-square sum 2;
    the only shapes are (root, root), (root * (1+i), 0) and its swap, each
    realized by an explicit word whose first column is verified exactly.
    """
    ctx = col.ctx
    if ctx.n not in RING_EQUALITY_NS:
        raise ValueError("base case is defined for n in %r" % (RING_EQUALITY_NS,))
    if col.measure() > mu_threshold(ctx):
        raise ValueError("column measure exceeds the base-case threshold")
    n, order = ctx.n, ctx.order
    one_plus_i = RingElem(ctx.one() + ctx.zeta(n // 2), 0)
    xp = col.x * one_plus_i
    yp = col.y * one_plus_i
    if not (xp.is_integral() and yp.is_integral()):
        raise IntegrityError("scaled base-case column is not integral")
    if yp.is_zero():
        j = as_zeta_power(col.x)
        if j is None:
            raise IntegrityError("base case 2: column is not a root of unity")
        seq = GateSequence(j, ())
    elif xp.is_zero():
        j = as_zeta_power(col.y)
        if j is None:
            raise IntegrityError("base case 3: column is not a root of unity")
        # zeta^j X, built as PH[j - n/2] H S S H  (H0 S^2 H0 = i X).
        seq = GateSequence((j - n // 2) % order, ("H", "S", "S", "H"))
    else:
        j = as_zeta_power(xp)
        l = as_zeta_power(yp)
        if j is None or l is None:
            raise IntegrityError("base case 1: scaled entries are not roots of unity")
        # -i zeta^j U_z((l-j) pi/n) H0 U_z(-(l+j) pi/n)
        tokens: list[str] = []
        a1 = (l - j) % order
        if a1:
            tokens.append(token_w(a1))
        tokens.append("H")
        a2 = (-l - j) % order
        if a2:
            tokens.append(token_w(a2))
        seq = GateSequence((j - n // 2) % order, tuple(tokens))
    v = eval_sequence(seq, ctx)
    if v.first_column() != (col.x, col.y):
        raise IntegrityError("base-case word has the wrong first column")
    return v, seq


def complete_unitary(u: UnitaryRn, v: UnitaryRn) -> int:
    """j with u = v U_z(j pi/n), for unitaries sharing a first column."""
    if u.ctx.n != v.ctx.n:
        raise ValueError("mixed contexts")
    if u.first_column() != v.first_column():
        raise ValueError("unitaries do not share a first column")
    delta = u.det() * v.det().conj()
    j = as_zeta_power(delta)
    if j is None:
        raise NoPhaseMatchError("determinant ratio is not a power of zeta_2n")
    zeta_j = RingElem.zeta(u.ctx, j)
    if not (
        u.rows[0][1] == v.rows[0][1] * zeta_j and u.rows[1][1] == v.rows[1][1] * zeta_j
    ):
        raise NoPhaseMatchError("phase does not complete the unitary")
    return j


def synthesize_ring(u: UnitaryRn) -> GateSequence:
    """An exact circuit for any unitary over the ring (n in {2,4,6,8,12}).

    Reduces the first column below the base-case measure with steps
    G_i = H0 U_z(pi k_i / n), builds the base-case unitary V, recovers the
    trailing z-rotation from the determinants, and emits
    G_1^dagger ... G_t^dagger V W^j.  The result reproduces the input
    exactly, including the global phase.
    """
    ctx = u.ctx
    if ctx.n not in RING_EQUALITY_NS:
        raise ValueError("ring synthesis is defined for n in %r" % (RING_EQUALITY_NS,))
    n, order = ctx.n, ctx.order
    col = ColumnRn(*u.first_column())
    threshold = mu_threshold(ctx)
    ks: list[int] = []
    while col.measure() > threshold:
        k, col = reduce_column_step(col)
        ks.append(k)
    v, v_seq = base_case_column(col)
    reduced = u
    for k in ks:
        g_seq = GateSequence(0, ("H", token_w(k % order)) if k % order else ("H",))
        reduced = eval_sequence(g_seq, ctx) @ reduced
    j = complete_unitary(reduced, v)
    # G^dagger = W^(2n-k) H up to the phase -i from H0^dagger = -i H0.
    phase = (v_seq.phase_power - len(ks) * (n // 2)) % order
    tokens: list[str] = []
    for k in ks:
        back = (order - k) % order
        if back:
            tokens.append(token_w(back))
        tokens.append("H")
    tokens.extend(v_seq.tokens)
    if j:
        tokens.append(token_w(j))
    seq = GateSequence(phase, tuple(tokens))
    if eval_sequence(seq, ctx) != u:
        raise IntegrityError("ring synthesis does not reproduce the input")
    return seq
