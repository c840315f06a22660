"""The Bloch-sphere image: exact SO(3) rotations over the real subring.

bloch() sends a unitary U to the 3x3 matrix R with column j holding the
expansion of U P_j U^dagger over the Paulis (P_1, P_2, P_3) = (X, Y, Z);
with this orientation bloch(UV) = bloch(U) bloch(V) holds exactly and
global phases vanish.  Cliffords map to the 24 signed permutation matrices
of determinant 1.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cyclo import Context
from .errors import IntegrityError
from .rings import BetaConstant, RingElem, _beta_exp_r
from .su2 import AXES, GateSequence, UnitaryRn, eval_sequence, h0, pauli, s_gate, u_axis

__all__ = [
    "CliffordRot",
    "Rotation",
    "bloch",
    "clifford_group",
    "clifford_unitary",
    "exponent_profile",
    "is_signed_permutation",
    "rotation_generator",
]


class Rotation:
    """A 3x3 orthogonal matrix of determinant 1 over the real subring."""

    __slots__ = ("ctx", "rows")

    def __init__(self, ctx: Context, rows, check: bool = True):
        self.ctx = ctx
        self.rows = tuple(tuple(row) for row in rows)
        if check:
            for row in self.rows:
                for e in row:
                    if not e.is_real():
                        raise ValueError("rotation entries must be real")
            if not self._is_special_orthogonal():
                raise ValueError("matrix is not a rotation (M M^T != I or det != 1)")

    def _is_special_orthogonal(self) -> bool:
        one = RingElem.one(self.ctx)
        for i in range(3):
            for j in range(i, 3):
                dot = _dot(self.rows[i], self.rows[j])
                want = one if i == j else RingElem.zero(self.ctx)
                if dot != want:
                    return False
        return self.det() == one

    @classmethod
    def identity(cls, ctx: Context) -> "Rotation":
        one, zero = RingElem.one(ctx), RingElem.zero(ctx)
        return cls(
            ctx,
            ((one, zero, zero), (zero, one, zero), (zero, zero, one)),
            check=False,
        )

    def __matmul__(self, other: "Rotation") -> "Rotation":
        if self.ctx.n != other.ctx.n:
            raise ValueError("mixed contexts in rotation product")
        orows = other.rows
        out = []
        for row in self.rows:
            acc = [None, None, None]
            for j in range(3):
                acc[j] = _combo(row, (orows[0][j], orows[1][j], orows[2][j]))
            out.append(tuple(acc))
        return Rotation(self.ctx, tuple(out), check=False)

    def transpose(self) -> "Rotation":
        r = self.rows
        return Rotation(
            self.ctx,
            tuple(tuple(r[j][i] for j in range(3)) for i in range(3)),
            check=False,
        )

    def det(self) -> RingElem:
        r = self.rows
        return (
            r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1])
            - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
            + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0])
        )

    def key(self):
        return tuple(e.key() for row in self.rows for e in row)

    def signed_perm_key(self):
        """Small-integer pattern if every entry is 0 or +-1, else None."""
        out = []
        for row in self.rows:
            for e in row:
                v = e.as_int()
                if v is None or v not in (-1, 0, 1):
                    return None
                out.append(v)
        return tuple(out)

    def __eq__(self, other):
        return (
            isinstance(other, Rotation)
            and self.ctx.n == other.ctx.n
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.ctx.n, self.key()))

    def __repr__(self):
        return "Rotation(n=%d, %r)" % (self.ctx.n, self.rows)


def _dot(u, v):
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def _combo(weights, vec):
    # sum of weights[j] * vec[j] with fast paths for 0 and +-1 weights
    acc = None
    for w, x in zip(weights, vec):
        if w.is_zero():
            continue
        term = x if w.as_int() == 1 else (-x if w.as_int() == -1 else w * x)
        acc = term if acc is None else acc + term
    return RingElem.zero(vec[0].ctx) if acc is None else acc


def bloch(u: UnitaryRn) -> Rotation:
    """Exact SO(3) image; column j expands U P_j U^dagger over the Paulis."""
    ctx = u.ctx
    ud = u.dagger()
    cols = []
    for p in AXES:
        a = (u @ pauli(ctx, p)) @ ud
        (a00, a01), (a10, a11) = a.rows
        tx = (a01 + a10).half()
        i_val = RingElem.zeta(ctx, ctx.n // 2)
        ty = (i_val * (a01 - a10)).half()
        tz = (a00 - a11).half()
        cols.append((tx, ty, tz))
    rows = tuple(tuple(cols[j][i] for j in range(3)) for i in range(3))
    return Rotation(ctx, rows)


def rotation_generator(ctx: Context, p: str, a: int) -> Rotation:
    """Exact Bloch image of the pi*a/n rotation about axis p."""
    if p not in AXES:
        raise ValueError("axis must be one of %r" % (AXES,))
    a %= ctx.order
    store = ctx._cache.setdefault("rot", {})
    rot = store.get((p, a))
    if rot is None:
        rot = store[(p, a)] = bloch(u_axis(ctx, p, 1, a))
    return rot


@dataclass(frozen=True)
class CliffordRot:
    """A signed permutation rotation with a shortest {H, S} word for it."""

    rotation: Rotation
    word: tuple[str, ...]


def clifford_group(ctx: Context) -> tuple[CliffordRot, ...]:
    """All 24 Clifford rotations, with lexicographically-first shortest words.

    Breadth-first closure from bloch(H0) and bloch(S); expanding H before S
    makes the assigned words deterministic.
    """
    cached = ctx._cache.get("clifford24")
    if cached is not None:
        return cached
    gens = (("H", bloch(h0(ctx))), ("S", bloch(s_gate(ctx))))
    start = Rotation.identity(ctx)
    seen = {start.key(): CliffordRot(start, ())}
    frontier = [seen[start.key()]]
    while frontier:
        nxt = []
        for elem in frontier:
            for tok, gen in gens:
                rot = elem.rotation @ gen
                key = rot.key()
                if key not in seen:
                    entry = CliffordRot(rot, elem.word + (tok,))
                    seen[key] = entry
                    nxt.append(entry)
        frontier = nxt
    elems = tuple(sorted(seen.values(), key=lambda e: (len(e.word), e.word)))
    if len(elems) != 24:
        raise IntegrityError("Clifford closure has %d elements, expected 24" % len(elems))
    table = {}
    for e in elems:
        pat = e.rotation.signed_perm_key()
        if pat is None:
            raise IntegrityError("Clifford rotation is not a signed permutation")
        table[pat] = e
    ctx._cache["clifford24"] = elems
    ctx._cache["clifford_table"] = table
    return elems


def is_signed_permutation(m: Rotation) -> CliffordRot | None:
    """Table lookup against the 24 Clifford rotations (with word), or None."""
    pat = m.signed_perm_key()
    if pat is None:
        return None
    clifford_group(m.ctx)
    return m.ctx._cache["clifford_table"].get(pat)


def clifford_unitary(ctx: Context, cr: CliffordRot) -> UnitaryRn:
    """A unitary realizing the rotation (the cached word evaluation)."""
    store = ctx._cache.setdefault("clifford_u", {})
    u = store.get(cr.word)
    if u is None:
        u = store[cr.word] = eval_sequence(GateSequence(0, cr.word), ctx)
    return u


def exponent_profile(m: Rotation, bc: BetaConstant) -> tuple[int, tuple[int, int, int]]:
    """Max denominator exponent over all nonzero entries, and per-row maxes."""
    row_max = []
    for row in m.rows:
        best = 0
        for e in row:
            if e.is_zero():
                continue
            r = _beta_exp_r(e, bc)
            if r > best:
                best = r
        row_max.append(best)
    return max(row_max), tuple(row_max)
