"""2x2 unitaries over Z[zeta_2n, 1/2], gate generators and token sequences.

Circuit text format: whitespace-separated tokens ``PH[a]``, ``H``, ``S``,
``W``, ``W^j``; ``PH[a]`` appears at most once, first, and carries the exact
global phase zeta_2n^a.  The leftmost token is the leftmost matrix factor.

Matrix JSON format::

    {"n": int, "denom_exp": m, "entries": [[c00, c01], [c10, c11]]}

where each c is a vector of d = phi(2n) integers (numerator coefficients in
the zeta_2n power basis) and the entry value is sum_j c_j zeta^j / 2^m.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .cyclo import Context, make_context
from .errors import IntegrityError
from .rings import RingElem

__all__ = [
    "CONJ_WORDS",
    "GateSequence",
    "UnitaryRn",
    "dagger_tokens",
    "equal_up_to_phase",
    "eval_sequence",
    "h0",
    "matrix_from_json",
    "matrix_to_json",
    "pauli",
    "s_gate",
    "scalar_gate",
    "token_w",
    "u_axis",
    "uz_power",
    "w_gate",
]

AXES = ("x", "y", "z")

# Clifford conjugator words: eval(word) maps Z to sign*P under conjugation,
# so eval(word) U_z(theta) eval(word)^dagger = U_{sign p}(theta) exactly
# (word phases cancel in the conjugation).
CONJ_WORDS = {
    ("z", +1): (),
    ("x", +1): ("H",),
    ("y", +1): ("S", "H"),
    ("z", -1): ("H", "S", "S", "H"),
    ("x", -1): ("H", "H", "S", "S", "H"),
    ("y", -1): ("S", "S", "S", "H"),
}


class UnitaryRn:
    """A 2x2 unitary with entries in Z[zeta_2n, 1/2]."""

    __slots__ = ("ctx", "rows")

    def __init__(self, ctx: Context, rows, check: bool = True):
        rows = (tuple(rows[0]), tuple(rows[1]))
        self.ctx = ctx
        self.rows = rows
        if check:
            for row in rows:
                for e in row:
                    if e.ctx.n != ctx.n:
                        raise ValueError("entry context does not match matrix context")
            if not self._is_unitary():
                raise ValueError("matrix is not unitary over the ring")

    def _is_unitary(self) -> bool:
        p = self @ self.dagger()
        one = RingElem.one(self.ctx)
        return (
            p.rows[0][0] == one
            and p.rows[1][1] == one
            and p.rows[0][1].is_zero()
            and p.rows[1][0].is_zero()
        )

    @classmethod
    def identity(cls, ctx: Context) -> "UnitaryRn":
        one, zero = RingElem.one(ctx), RingElem.zero(ctx)
        return cls(ctx, ((one, zero), (zero, one)), check=False)

    def dagger(self) -> "UnitaryRn":
        (a, b), (c, d) = self.rows
        return UnitaryRn(
            self.ctx, ((a.conj(), c.conj()), (b.conj(), d.conj())), check=False
        )

    def __matmul__(self, other: "UnitaryRn") -> "UnitaryRn":
        if self.ctx.n != other.ctx.n:
            raise ValueError("mixed contexts in matrix product")
        (a, b), (c, d) = self.rows
        (e, f), (g, h) = other.rows
        return UnitaryRn(
            self.ctx,
            (
                (a * e + b * g, a * f + b * h),
                (c * e + d * g, c * f + d * h),
            ),
            check=False,
        )

    def scale(self, lam: RingElem) -> "UnitaryRn":
        return UnitaryRn(
            self.ctx,
            tuple(tuple(lam * e for e in row) for row in self.rows),
            check=False,
        )

    def det(self) -> RingElem:
        (a, b), (c, d) = self.rows
        return a * d - b * c

    def is_diagonal(self) -> bool:
        return self.rows[0][1].is_zero() and self.rows[1][0].is_zero()

    def first_column(self) -> tuple[RingElem, RingElem]:
        return (self.rows[0][0], self.rows[1][0])

    def __eq__(self, other):
        return (
            isinstance(other, UnitaryRn)
            and self.ctx.n == other.ctx.n
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.ctx.n, tuple(e.key() for row in self.rows for e in row)))

    def __repr__(self):
        return "UnitaryRn(n=%d, %r)" % (self.ctx.n, self.rows)


def _cached(ctx: Context, key, build):
    store = ctx._cache.setdefault("su2", {})
    val = store.get(key)
    if val is None:
        val = store[key] = build()
    return val


def h0(ctx: Context) -> UnitaryRn:
    """The phase-adjusted Hadamard (1/2) [[1+i, 1+i], [1+i, -1-i]]."""

    def build():
        hp = RingElem(ctx.one() + ctx.zeta(ctx.n // 2), 1)  # (1+i)/2
        return UnitaryRn(ctx, ((hp, hp), (hp, -hp)))

    return _cached(ctx, "H", build)


def s_gate(ctx: Context) -> UnitaryRn:
    def build():
        one, zero = RingElem.one(ctx), RingElem.zero(ctx)
        return UnitaryRn(ctx, ((one, zero), (zero, RingElem.zeta(ctx, ctx.n // 2))))

    return _cached(ctx, "S", build)


def uz_power(ctx: Context, a: int) -> UnitaryRn:
    """U_z(a pi / n) = diag(1, zeta_2n^a), 0 <= a < 2n."""
    if not 0 <= a < ctx.order:
        raise ValueError("rotation exponent %d out of range [0, 2n)" % a)
    def build():
        one, zero = RingElem.one(ctx), RingElem.zero(ctx)
        return UnitaryRn(ctx, ((one, zero), (zero, RingElem.zeta(ctx, a))))

    return _cached(ctx, ("Uz", a), build)


def w_gate(ctx: Context, j: int = 1) -> UnitaryRn:
    if not 1 <= j < ctx.order:
        raise ValueError("W exponent must lie in [1, 2n)")
    return uz_power(ctx, j)


def scalar_gate(ctx: Context, a: int) -> UnitaryRn:
    """zeta_2n^a times the identity."""
    a %= ctx.order
    def build():
        lam = RingElem.zeta(ctx, a)
        zero = RingElem.zero(ctx)
        return UnitaryRn(ctx, ((lam, zero), (zero, lam)))

    return _cached(ctx, ("PH", a), build)


def pauli(ctx: Context, p: str) -> UnitaryRn:
    if p not in AXES:
        raise ValueError("axis must be one of %r" % (AXES,))

    def build():
        one, zero = RingElem.one(ctx), RingElem.zero(ctx)
        i_val = RingElem.zeta(ctx, ctx.n // 2)
        if p == "x":
            return UnitaryRn(ctx, ((zero, one), (one, zero)))
        if p == "y":
            return UnitaryRn(ctx, ((zero, -i_val), (i_val, zero)))
        return UnitaryRn(ctx, ((one, zero), (zero, -one)))

    return _cached(ctx, ("P", p), build)


def u_axis(ctx: Context, p: str, sign: int, a: int) -> UnitaryRn:
    """The rotation exp(i a pi/n (1 - sign*P)/2) about axis p.

    Expands to ((1 + zeta^a)/2) I + sign ((1 - zeta^a)/2) P, which agrees
    with conjugating U_z(a pi/n) by any Clifford mapping Z to sign*P.
    """
    if p not in AXES:
        raise ValueError("axis must be one of %r" % (AXES,))
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if not 0 <= a < ctx.order:
        raise ValueError("rotation exponent %d out of range [0, 2n)" % a)

    def build():
        za = ctx.zeta(a)
        h = RingElem(ctx.one() + za, 1)
        g = RingElem(ctx.one() - za, 1)
        if sign < 0:
            g = -g
        pm = pauli(ctx, p)
        ident = UnitaryRn.identity(ctx)
        rows = tuple(
            tuple(
                h * ident.rows[r][c] + g * pm.rows[r][c]
                for c in range(2)
            )
            for r in range(2)
        )
        return UnitaryRn(ctx, rows)

    return _cached(ctx, ("U", p, sign, a), build)


# -- gate sequences ---------------------------------------------------------

_W_TOKEN = re.compile(r"^W(?:\^(\d+))?$")
_PH_TOKEN = re.compile(r"^PH\[(\d+)\]$")


def token_w(j: int) -> str:
    return "W" if j == 1 else "W^%d" % j


@dataclass(frozen=True)
class GateSequence:
    """A circuit word over {H, S, W^j} with an exact global-phase token."""

    phase_power: int = 0
    tokens: tuple[str, ...] = field(default_factory=tuple)

    def cost(self) -> int:
        """Number of non-Clifford generator uses (W^j counts j)."""
        total = 0
        for t in self.tokens:
            m = _W_TOKEN.match(t)
            if m:
                total += int(m.group(1)) if m.group(1) else 1
        return total

    def to_text(self) -> str:
        parts = []
        if self.phase_power:
            parts.append("PH[%d]" % self.phase_power)
        parts.extend(self.tokens)
        return " ".join(parts)

    @classmethod
    def from_text(cls, text: str, ctx: Context) -> "GateSequence":
        phase = 0
        tokens = []
        parts = text.split()
        for idx, tok in enumerate(parts):
            ph = _PH_TOKEN.match(tok)
            if ph:
                if idx != 0:
                    raise ValueError("PH token must appear first")
                phase = int(ph.group(1))
                if not 0 <= phase < ctx.order:
                    raise ValueError("PH exponent out of range [0, 2n)")
                continue
            if tok in ("H", "S"):
                tokens.append(tok)
                continue
            m = _W_TOKEN.match(tok)
            if m:
                j = int(m.group(1)) if m.group(1) else 1
                if not 1 <= j < ctx.order:
                    raise ValueError("W exponent %d out of range [1, 2n)" % j)
                tokens.append(token_w(j))
                continue
            raise ValueError("unknown circuit token %r" % tok)
        return cls(phase, tuple(tokens))

    def __iter__(self):
        return iter(self.tokens)


def eval_sequence(seq: GateSequence, ctx: Context) -> UnitaryRn:
    """Exact product zeta^phase * (leftmost token first)."""
    acc = scalar_gate(ctx, seq.phase_power)
    for tok in seq.tokens:
        if tok == "H":
            acc = acc @ h0(ctx)
        elif tok == "S":
            acc = acc @ s_gate(ctx)
        else:
            m = _W_TOKEN.match(tok)
            if not m:
                raise ValueError("unknown circuit token %r" % tok)
            j = int(m.group(1)) if m.group(1) else 1
            acc = acc @ w_gate(ctx, j)
    return acc


def dagger_tokens(word: tuple[str, ...]) -> tuple[tuple[str, ...], int]:
    """Tokens and H-count h with eval(word)^dagger = zeta^(-h*n/2) eval(out).

    H is its own inverse up to the phase i (H0^2 = i I), so each H in the
    word leaves a factor of -i = zeta^(-n/2); S^dagger = S^3 exactly.
    """
    out = []
    h_count = 0
    for tok in reversed(word):
        if tok == "H":
            out.append("H")
            h_count += 1
        elif tok == "S":
            out.extend(("S", "S", "S"))
        else:
            raise ValueError("conjugator words contain only H and S tokens")
    return tuple(out), h_count


def equal_up_to_phase(u: UnitaryRn, v: UnitaryRn) -> RingElem | None:
    """The scalar lam with u = lam * v, if one exists."""
    if u.ctx.n != v.ctx.n:
        raise ValueError("mixed contexts")
    p = u @ v.dagger()
    if not (p.rows[0][1].is_zero() and p.rows[1][0].is_zero()):
        return None
    if p.rows[0][0] != p.rows[1][1]:
        return None
    lam = p.rows[0][0]
    if lam.abs2() != RingElem.one(u.ctx):
        raise IntegrityError("proportionality scalar is not unit modulus")
    return lam


# -- serialization -----------------------------------------------------------


def matrix_to_json(u: UnitaryRn) -> dict:
    """Common-denominator JSON form of a unitary."""
    m = max(e.m for row in u.rows for e in row)
    entries = []
    for row in u.rows:
        out_row = []
        for e in row:
            scaled = e.num * (1 << (m - e.m))
            out_row.append(list(scaled.coeffs))
        entries.append(out_row)
    return {"n": u.ctx.n, "denom_exp": m, "entries": entries}


def matrix_from_json(obj: dict) -> UnitaryRn:
    if not isinstance(obj, dict):
        raise ValueError("matrix JSON must be an object")
    for key in ("n", "denom_exp", "entries"):
        if key not in obj:
            raise ValueError("matrix JSON missing field %r" % key)
    n = obj["n"]
    if not isinstance(n, int) or n < 2 or n % 2:
        raise ValueError("field 'n' must be a positive even integer")
    ctx = make_context(n)
    m = obj["denom_exp"]
    if not isinstance(m, int) or m < 0:
        raise ValueError("field 'denom_exp' must be a nonnegative integer")
    entries = obj["entries"]
    if not (isinstance(entries, list) and len(entries) == 2):
        raise ValueError("field 'entries' must be a 2x2 array")
    rows = []
    for r, row in enumerate(entries):
        if not (isinstance(row, list) and len(row) == 2):
            raise ValueError("field 'entries' must be a 2x2 array")
        out_row = []
        for c, vec in enumerate(row):
            if not isinstance(vec, list):
                raise ValueError("entry (%d,%d) must be a coefficient vector" % (r, c))
            try:
                num = ctx.from_coeffs(vec)
            except ValueError as exc:
                raise ValueError("entry (%d,%d): %s" % (r, c, exc)) from None
            out_row.append(RingElem(num, m))
        rows.append(tuple(out_row))
    return UnitaryRn(ctx, tuple(rows))
