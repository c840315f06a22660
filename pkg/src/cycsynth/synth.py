"""Optimal exact synthesis by denominator-exponent descent.

canonical_form() recovers, for any synthesizable unitary, the unique
decomposition U = U_{p1}(a1 pi/n) ... U_{pm}(am pi/n) D with adjacent axes
distinct, 1 <= a_i < n/2 and D a 2n-th root of unity times a Clifford.  The
descent peels one rotation per step by locating the unique candidate
R_q^(-b) that minimizes the maximum denominator exponent of the Bloch
matrix; ties or non-decreasing minima only occur outside the synthesizable
group and surface as NotReducibleError.

canonicalize_sequence() computes the same form for a gate word by pure
algebraic rewriting (pseudo-commutation, angle merging, sign elimination)
and never looks at denominator exponents, so it serves as an independent
cross-check of the descent.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .cyclo import Context, make_context
from .errors import IntegrityError, NotReducibleError, PhaseNotInRingError
from .rings import BetaConstant, RingElem, _beta_exp_r, as_zeta_power, beta_constant
from .so3 import (
    CliffordRot,
    Rotation,
    bloch,
    clifford_group,
    clifford_unitary,
    is_signed_permutation,
    rotation_generator,
)
from .su2 import (
    AXES,
    CONJ_WORDS,
    GateSequence,
    UnitaryRn,
    dagger_tokens,
    equal_up_to_phase,
    eval_sequence,
    h0,
    s_gate,
    scalar_gate,
    token_w,
    u_axis,
)

__all__ = [
    "CanonicalForm",
    "MembershipResult",
    "axis_detect",
    "bfs_cosets",
    "brute_force_min_tcount",
    "canonical_form",
    "canonicalize_sequence",
    "membership",
    "random_unitary",
    "tcount",
    "to_circuit",
]


@dataclass(frozen=True)
class CanonicalForm:
    """The unique rotation-product normal form of a synthesizable unitary."""

    n: int
    axes: tuple[str, ...]
    exponents: tuple[int, ...]
    residual: CliffordRot
    phase_power: int

    @property
    def m(self) -> int:
        return len(self.axes)

    def tcount(self) -> int:
        half = self.n // 2
        return sum(min(a, half - a) for a in self.exponents)


@dataclass(frozen=True)
class MembershipResult:
    is_member: bool
    sequence: GateSequence | None
    reason: str | None


# -- descent ------------------------------------------------------------------


def _entry_bounds(e: RingElem, k1: int) -> tuple[int, int]:
    # The denominator exponent of a normalized nonzero entry num/2^m lies in
    # [(m-1)*k1 + 1, m*k1] for m >= 1 (k1 = 2^(k-1)) and equals 0 for m = 0,
    # because a normalized numerator is never divisible by beta^k1.
    if e.m == 0:
        return 0, 0
    return (e.m - 1) * k1 + 1, e.m * k1


def _row_max_exact(row, bc: BetaConstant) -> int:
    best = 0
    for e in row:
        if e.is_zero():
            continue
        r = _beta_exp_r(e, bc)
        if r > best:
            best = r
    return best


def _candidate_rmax(entries, floor: int, bc: BetaConstant, k1: int, cutoff):
    """Exact max denominator exponent, or None once it provably exceeds cutoff."""
    val = floor
    if cutoff is not None and val > cutoff:
        return None
    pending = []
    for e in entries:
        if e.is_zero():
            continue
        lo, hi = _entry_bounds(e, k1)
        if lo == hi:
            if lo > val:
                val = lo
                if cutoff is not None and val > cutoff:
                    return None
        else:
            pending.append((hi, lo, e))
    pending.sort(key=lambda t: (t[0], t[1]), reverse=True)
    for hi, lo, e in pending:
        if hi <= val:
            continue
        r = _beta_exp_r(e, bc)
        if r > val:
            val = r
            if cutoff is not None and val > cutoff:
                return None
    return val


def axis_detect(m: Rotation, bc: BetaConstant) -> tuple[str, int]:
    """The unique (axis, exponent) whose inverse rotation minimizes the
    maximum denominator exponent of the matrix.

    Scans all 3 (n/2 - 1) candidates R_q^(-b) M.  A candidate is discarded
    as soon as its exponent provably exceeds the best seen (the row left
    unchanged by R_q gives a free floor; entry exponents are bracketed by
    the power-of-two denominator before any divisibility chain runs), which
    never changes the arg-min or the tie check.  Ties and non-reducing
    minima raise NotReducibleError.
    """
    ctx = m.ctx
    n = ctx.n
    half = n // 2
    if half < 2:
        raise NotReducibleError("no rotation candidates exist for n = 2")
    k1 = 1 << (bc.k - 1)
    rows = m.rows
    row_max = [_row_max_exact(row, bc) for row in rows]
    cur_max = max(row_max)
    # Try the deficient axis first: for synthesizable inputs the winning
    # candidate lives there, and the floors then dismiss the other axes.
    axis_order = sorted(range(3), key=lambda i: (row_max[i], i))
    best = None
    best_val = None
    tie = False
    for qi in axis_order:
        floor = row_max[qi]
        if best_val is not None and floor > best_val:
            continue
        i1, i2 = [i for i in range(3) if i != qi]
        for b in range(1, half):
            rot = rotation_generator(ctx, AXES[qi], ctx.order - b)
            c11, c12 = rot.rows[i1][i1], rot.rows[i1][i2]
            c21, c22 = rot.rows[i2][i1], rot.rows[i2][i2]
            cand = []
            for j in range(3):
                cand.append(c11 * rows[i1][j] + c12 * rows[i2][j])
                cand.append(c21 * rows[i1][j] + c22 * rows[i2][j])
            val = _candidate_rmax(cand, floor, bc, k1, best_val)
            if val is None:
                continue
            if best_val is None or val < best_val:
                best, best_val, tie = (AXES[qi], b), val, False
            elif val == best_val:
                tie = True
    if best is None or best_val >= cur_max:
        raise NotReducibleError("no candidate strictly reduces the exponent")
    if tie:
        raise NotReducibleError("minimal candidate is not unique")
    return best


def canonical_form(u: UnitaryRn) -> CanonicalForm:
    """Compute the canonical decomposition of a synthesizable unitary.

    Raises NotReducibleError if the Bloch descent gets stuck (the input is
    not synthesizable) and PhaseNotInRingError if the descent succeeds but
    the residual global phase is not a 2n-th root of unity.
    """
    ctx = u.ctx
    bc = beta_constant(ctx)
    m = bloch(u)
    axes: list[str] = []
    exps: list[int] = []
    while True:
        hit = is_signed_permutation(m)
        if hit is not None:
            residual = hit
            break
        q, b = axis_detect(m, bc)
        if axes and axes[-1] == q:
            raise NotReducibleError("descent produced adjacent repeated axes")
        axes.append(q)
        exps.append(b)
        m = rotation_generator(ctx, q, ctx.order - b) @ m
    prod = UnitaryRn.identity(ctx)
    for p, a in zip(axes, exps):
        prod = prod @ u_axis(ctx, p, 1, a)
    d = prod.dagger() @ u
    lam = equal_up_to_phase(d, clifford_unitary(ctx, residual))
    if lam is None:
        raise IntegrityError("residual does not match its Clifford word")
    j = as_zeta_power(lam)
    if j is None:
        raise PhaseNotInRingError("residual phase is not a power of zeta_2n")
    return CanonicalForm(ctx.n, tuple(axes), tuple(exps), residual, j)


# -- rewriting oracle ----------------------------------------------------------


class _RewriteState:
    """Accumulator for the rewriting pass: a prefix of the input is kept as
    zeta^ph * (rotation factors, adjacent axes distinct) * pending Clifford."""

    __slots__ = ("ctx", "ph", "factors", "pend_u", "pend_rot")

    def __init__(self, ctx: Context, phase: int):
        self.ctx = ctx
        self.ph = phase % ctx.order
        self.factors: list[tuple[str, int]] = []
        self.pend_u = UnitaryRn.identity(ctx)
        self.pend_rot = Rotation.identity(ctx)

    def absorb_clifford_right(self, u: UnitaryRn, rot: Rotation) -> None:
        self.pend_u = self.pend_u @ u
        self.pend_rot = self.pend_rot @ rot

    def absorb_clifford_left(self, p: str, quarter_turns: int) -> None:
        # U_p(pi/2)^q joins the pending Clifford from the factor side.
        ctx = self.ctx
        a = (quarter_turns * (ctx.n // 2)) % ctx.order
        if a == 0:
            return
        k = u_axis(ctx, p, 1, a)
        self.pend_u = k @ self.pend_u
        self.pend_rot = rotation_generator(ctx, p, a) @ self.pend_rot

    def conjugated_z_axis(self) -> tuple[str, int]:
        # Image of Z under the pending Clifford: the signed unit column z.
        col = [self.pend_rot.rows[i][2] for i in range(3)]
        for i, e in enumerate(col):
            v = e.as_int()
            if v in (1, -1):
                return AXES[i], v
        raise IntegrityError("pending Clifford image of Z is not a signed axis")

    def push_factor(self, p: str, sign: int, a: int) -> None:
        """Insert U_{sign p}(a pi/n) immediately left of the pending Clifford."""
        ctx = self.ctx
        a %= ctx.order
        if a == 0:
            return
        if sign < 0:
            # U_{-p}(a) = zeta^a U_p(2n - a)
            self.ph = (self.ph + a) % ctx.order
            a = ctx.order - a
        half = ctx.n // 2
        quarters, rest = divmod(a, half)
        if quarters:
            self.absorb_clifford_left(p, quarters)
        if rest == 0:
            return
        if self.factors and self.factors[-1][0] == p:
            _, prev = self.factors.pop()
            total = prev + rest
            quarters, rest = divmod(total, half)
            if quarters:
                self.absorb_clifford_left(p, quarters)
            if rest == 0:
                return
        self.factors.append((p, rest))


def canonicalize_sequence(seq: GateSequence, ctx: Context) -> CanonicalForm:
    """Canonical form of a gate word, by rewriting alone.

    Walks the tokens once: Cliffords accumulate on the right; each W block
    is conjugated through the accumulated Clifford (updating its axis and
    sign), its sign removed via the inversion identity, quarter turns split
    off as Cliffords, and the remainder merged with the factor list.  The
    result is a decomposition of the required shape, hence by uniqueness
    the same one the descent computes.
    """
    st = _RewriteState(ctx, seq.phase_power)
    bloch_h = _bloch_cached(ctx, "H")
    bloch_s = _bloch_cached(ctx, "S")
    for tok in seq.tokens:
        if tok == "H":
            st.absorb_clifford_right(h0(ctx), bloch_h)
        elif tok == "S":
            st.absorb_clifford_right(s_gate(ctx), bloch_s)
        else:
            j = seq_token_exponent(tok)
            p, sign = st.conjugated_z_axis()
            st.push_factor(p, sign, j)
    residual = is_signed_permutation(st.pend_rot)
    if residual is None:
        raise IntegrityError("pending Clifford is not a signed permutation")
    d = scalar_gate(ctx, st.ph) @ st.pend_u
    lam = equal_up_to_phase(d, clifford_unitary(ctx, residual))
    if lam is None:
        raise IntegrityError("pending Clifford does not match its table word")
    j = as_zeta_power(lam)
    if j is None:
        raise IntegrityError("rewriting produced a phase outside the root lattice")
    return CanonicalForm(
        ctx.n, tuple(p for p, _ in st.factors), tuple(a for _, a in st.factors),
        residual, j,
    )


def seq_token_exponent(tok: str) -> int:
    if tok == "W":
        return 1
    if tok.startswith("W^"):
        return int(tok[2:])
    raise ValueError("unknown circuit token %r" % tok)


def _bloch_cached(ctx: Context, which: str) -> Rotation:
    store = ctx._cache.setdefault("bloch_gen", {})
    rot = store.get(which)
    if rot is None:
        gate = h0(ctx) if which == "H" else s_gate(ctx)
        rot = store[which] = bloch(gate)
    return rot


# -- emission -------------------------------------------------------------------


def _emit_conjugated(ctx: Context, p: str, sign: int, a: int) -> tuple[list[str], int]:
    # Tokens realizing U_{sign p}(a pi/n) exactly as zeta^(-comp) * eval(tokens),
    # with cost a; comp returned in phase units.
    word = CONJ_WORDS[(p, sign)]
    inv, h_count = dagger_tokens(word)
    tokens = list(word) + [token_w(a)] + list(inv)
    return tokens, (h_count * (ctx.n // 2)) % ctx.order


def _emit_quarter(ctx: Context, p: str) -> tuple[list[str], int]:
    # Tokens for the Clifford U_p(pi/2) = C S C^dagger.
    word = CONJ_WORDS[(p, 1)]
    inv, h_count = dagger_tokens(word)
    tokens = list(word) + ["S"] + list(inv)
    return tokens, (h_count * (ctx.n // 2)) % ctx.order


def to_circuit(cf: CanonicalForm) -> GateSequence:
    """Emit a {H, S, W} word for the canonical form with optimal W cost.

    Each factor U_p(a pi/n) costs min(a, n/2 - a): directly conjugated W^a
    when a <= n/4, otherwise through the inversion identity
    U_p(a) = zeta^(a - n/2) U_p(pi/2) U_{-p}(n/2 - a).
    """
    ctx = make_context(cf.n)
    half = cf.n // 2
    tokens: list[str] = []
    # Each emitted block evaluates to zeta^comp times its gate, so the
    # leading PH token compensates by subtracting every comp.
    phase = cf.phase_power
    for p, a in zip(cf.axes, cf.exponents):
        if a <= cf.n // 4:
            toks, comp = _emit_conjugated(ctx, p, 1, a)
            tokens += toks
            phase -= comp
        else:
            b = half - a
            qt, qcomp = _emit_quarter(ctx, p)
            mt, mcomp = _emit_conjugated(ctx, p, -1, b)
            tokens += qt + mt
            phase -= qcomp + mcomp + b
    tokens += list(cf.residual.word)
    return GateSequence(phase % ctx.order, tuple(tokens))


def tcount(u: UnitaryRn) -> int:
    """Minimal number of W = U_z(pi/n) gates implementing u up to phase."""
    return canonical_form(u).tcount()


def membership(u: UnitaryRn) -> MembershipResult:
    """Decide synthesizability; Member results carry an exact circuit.

    Member verdicts are always sound: the returned circuit re-evaluates to
    the input exactly.  NotMember verdicts are sound for synthesizable
    inputs by uniqueness of the canonical form; for n in {2, 4, 6, 8, 12}
    they are also complete (every unitary over the ring comes back Member),
    while for other n the stuck-descent rule has no completeness proof.
    """
    try:
        cf = canonical_form(u)
    except NotReducibleError as exc:
        return MembershipResult(False, None, "descent: %s" % exc)
    except PhaseNotInRingError:
        return MembershipResult(False, None, "phase")
    seq = to_circuit(cf)
    if eval_sequence(seq, u.ctx) != u:
        raise IntegrityError("emitted circuit does not reproduce the input")
    return MembershipResult(True, seq, None)


# -- brute-force oracle ----------------------------------------------------------


def _coset_key(rot: Rotation, cliffords) -> tuple:
    # Canonical representative of rot * C over the 24 Cliffords: multiplying
    # by a signed permutation on the right permutes and signs columns, so
    # candidates are cheap entry shuffles; take the lexicographically least.
    base = [[rot.rows[i][j] for j in range(3)] for i in range(3)]
    best = None
    for cr in cliffords:
        pat = cr.rotation.signed_perm_key()
        cand = []
        for i in range(3):
            for j in range(3):
                acc = None
                for t in range(3):
                    s = pat[3 * t + j]
                    if s:
                        acc = base[i][t] if s > 0 else -base[i][t]
                        break
                cand.append(acc.key())
        cand = tuple(cand)
        if best is None or cand < best:
            best = cand
    return best


def bfs_cosets(ctx: Context, bound: int) -> dict:
    """All right-Clifford cosets reachable with at most `bound` single
    pi/n rotations, mapped to (cost, generator list).  Memoized per
    (context, bound): the table is a pure function of both."""
    store = ctx._cache.setdefault("bfs", {})
    cached = store.get(bound)
    if cached is not None:
        return cached
    cliffords = clifford_group(ctx)
    gens = []
    for p in AXES:
        for sign in (1, -1):
            gens.append(((p, sign), bloch(u_axis(ctx, p, sign, 1))))
    start = Rotation.identity(ctx)
    out = {_coset_key(start, cliffords): (0, ())}
    frontier = [(start, ())]
    for depth in range(1, bound + 1):
        nxt = []
        for rot, path in frontier:
            for tag, gen in gens:
                cand = gen @ rot
                key = _coset_key(cand, cliffords)
                if key not in out:
                    entry = (depth, path + (tag,))
                    out[key] = entry
                    nxt.append((cand, path + (tag,)))
        frontier = nxt
    store[bound] = out
    return out


def brute_force_min_tcount(u: UnitaryRn, bound: int) -> int | None:
    """Minimal rotation count reaching u's Bloch coset, by exhaustive BFS."""
    ctx = u.ctx
    cliffords = clifford_group(ctx)
    target = _coset_key(bloch(u), cliffords)
    table = bfs_cosets(ctx, bound)
    hit = table.get(target)
    return hit[0] if hit is not None else None


def witness_unitary(ctx: Context, path) -> UnitaryRn:
    """The unitary realized by a BFS generator path (applied left to right)."""
    acc = UnitaryRn.identity(ctx)
    for p, sign in path:
        acc = u_axis(ctx, p, sign, 1) @ acc
    return acc


# -- random instances -------------------------------------------------------------


def random_unitary(
    ctx: Context, target_tcount: int, seed: int
) -> tuple[UnitaryRn, GateSequence]:
    """Deterministic random canonical-shaped product with the given cost.

    Draws factors whose costs min(a, n/2 - a) sum to the target, adjacent
    axes distinct, then a random Clifford and global phase.  By uniqueness
    of the canonical form the synthesized cost equals the target.
    """
    if target_tcount < 0:
        raise ValueError("target_tcount must be nonnegative")
    rng = random.Random(seed)
    half = ctx.n // 2
    max_step = ctx.n // 4
    if target_tcount and max_step == 0:
        raise ValueError("n = 2 admits only Clifford unitaries (tcount 0)")
    factors: list[tuple[str, int]] = []
    budget = target_tcount
    prev = None
    while budget > 0:
        c = rng.randint(1, min(max_step, budget))
        a = c if (half - c == c or rng.random() < 0.5) else half - c
        p = rng.choice([ax for ax in AXES if ax != prev])
        factors.append((p, a))
        prev = p
        budget -= c
    residual = rng.choice(clifford_group(ctx))
    phase = rng.randrange(ctx.order)
    u = scalar_gate(ctx, phase)
    for p, a in factors:
        u = u @ u_axis(ctx, p, 1, a)
    u = u @ clifford_unitary(ctx, residual)
    cf_like = CanonicalForm(ctx.n, tuple(p for p, _ in factors),
                            tuple(a for _, a in factors), residual, phase)
    seq = to_circuit(cf_like)
    if eval_sequence(seq, ctx) != u:
        raise IntegrityError("random instance witness does not evaluate back")
    return u, seq
