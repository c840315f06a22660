"""Command-line front end with bit-exact I/O.

Exit codes: 0 success / condition true, 1 negative result (NotMember,
condition false, verification mismatch), 2 usage or input error,
3 internal integrity failure.
"""

from __future__ import annotations

import argparse
import cmath
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from .cyclo import make_context
from .errors import IntegrityError, SynthesisError
from .ringsynth import (
    RING_EQUALITY_NS,
    iter_census,
    phase_condition_witness,
    synthesize_ring,
    verify_finite_lemma,
)
from .su2 import (
    GateSequence,
    UnitaryRn,
    equal_up_to_phase,
    eval_sequence,
    matrix_from_json,
    matrix_to_json,
)
from .rings import as_zeta_power
from .synth import canonical_form, membership, random_unitary, to_circuit

CHECKPOINT_EVERY = 100_000


def _approx_entry(e, n: int) -> complex:
    zeta = cmath.exp(1j * cmath.pi / n)
    total = sum(c * zeta**j for j, c in enumerate(e.num.coeffs))
    return total / 2**e.m


def _print_approx(u: UnitaryRn, out) -> None:
    print("# approximate decimal view (non-authoritative):", file=out)
    for row in u.rows:
        vals = ", ".join("%.6f%+.6fj" % (z.real, z.imag)
                         for z in (_approx_entry(e, u.ctx.n) for e in row))
        print("#   [%s]" % vals, file=out)


def _read_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ValueError("cannot read matrix JSON from %r: %s" % (path, exc)) from None


def _read_matrices(path: str, expect_n: int) -> list[UnitaryRn]:
    """One JSON object, or JSONL with one matrix per line (batch synthesis)."""
    if path == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(path) as fh:
                text = fh.read()
        except OSError as exc:
            raise ValueError("cannot read %r: %s" % (path, exc)) from None
    text = text.strip()
    if not text:
        raise ValueError("empty matrix input")
    try:
        objs = [json.loads(text)]  # a single (possibly pretty-printed) object
    except json.JSONDecodeError:
        objs = []
        for idx, ln in enumerate(text.splitlines()):
            if not ln.strip():
                continue
            try:
                objs.append(json.loads(ln))
            except json.JSONDecodeError as exc:
                raise ValueError(
                    "line %d is not valid JSON: %s" % (idx + 1, exc)
                ) from None
    out = []
    for idx, obj in enumerate(objs):
        u = matrix_from_json(obj)
        if u.ctx.n != expect_n:
            raise ValueError(
                "entry %d has n=%d but --n %d was given" % (idx + 1, u.ctx.n, expect_n)
            )
        out.append(u)
    return out


def _synth_one(args: tuple[int, dict]) -> tuple[str, str]:
    n, obj = args
    u = matrix_from_json(obj)
    cf = canonical_form(u)
    seq = to_circuit(cf)
    stats = "tcount=%d m=%d" % (cf.tcount(), cf.m)
    return seq.to_text(), stats


def cmd_synth(args, out) -> int:
    ctx = make_context(args.n)
    matrices = _read_matrices(args.input, args.n)
    results = []
    if args.method == "ring":
        for u in matrices:
            seq = synthesize_ring(u)
            results.append((seq.to_text(), "cost=%d" % seq.cost()))
    elif args.jobs > 1 and len(matrices) > 1:
        payload = [(args.n, matrix_to_json(u)) for u in matrices]
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_synth_one, payload))
    else:
        for u in matrices:
            cf = canonical_form(u)
            seq = to_circuit(cf)
            results.append((seq.to_text(), "tcount=%d m=%d" % (cf.tcount(), cf.m)))
    sink = open(args.output, "w") if args.output else out
    try:
        for (text, stats), u in zip(results, matrices):
            if args.format == "json":
                blob = {"circuit": text}
                blob.update(
                    (k, int(v)) for k, v in (kv.split("=") for kv in stats.split())
                )
                print(json.dumps(blob, sort_keys=True), file=sink)
            else:
                print(text, file=sink)
                print(stats, file=sink)
            if args.approx:
                _print_approx(u, sink)
    finally:
        if args.output:
            sink.close()
    return 0


def cmd_ringsynth(args, out) -> int:
    matrices = _read_matrices(args.input, args.n)
    for u in matrices:
        seq = synthesize_ring(u)
        print(seq.to_text(), file=out)
        print("cost=%d" % seq.cost(), file=out)
    return 0


def cmd_verify(args, out) -> int:
    ctx = make_context(args.n)
    obj = _read_json(args.matrix)
    u = matrix_from_json(obj)
    if u.ctx.n != args.n:
        raise ValueError("matrix has n=%d but --n %d was given" % (u.ctx.n, args.n))
    try:
        if args.circuit == "-":
            text = sys.stdin.read()
        else:
            with open(args.circuit) as fh:
                text = fh.read()
    except OSError as exc:
        raise ValueError("cannot read circuit from %r: %s" % (args.circuit, exc)) from None
    seq = GateSequence.from_text(text, ctx)
    value = eval_sequence(seq, ctx)
    lam = equal_up_to_phase(value, u)
    power = as_zeta_power(lam) if lam is not None else None
    if power is not None:
        print("ok: circuit matches the matrix up to zeta_%d^%d"
              % (2 * args.n, power), file=out)
        return 0
    print("mismatch: circuit does not reproduce the matrix up to a root phase",
          file=out)
    return 1


def cmd_tcount(args, out) -> int:
    matrices = _read_matrices(args.input, args.n)
    for u in matrices:
        print("tcount=%d" % canonical_form(u).tcount(), file=out)
    return 0


def cmd_member(args, out) -> int:
    matrices = _read_matrices(args.input, args.n)
    code = 0
    for u in matrices:
        res = membership(u)
        if args.format == "json":
            blob = {
                "member": res.is_member,
                "circuit": res.sequence.to_text() if res.is_member else None,
                "reason": res.reason,
            }
            print(json.dumps(blob, sort_keys=True), file=out)
        elif res.is_member:
            print("Member", file=out)
            print(res.sequence.to_text(), file=out)
        else:
            print("NotMember (%s)" % res.reason, file=out)
        if not res.is_member:
            code = 1
    return code


def cmd_check_finite_lemma(args, out) -> int:
    ok = verify_finite_lemma(args.n)
    print("true" if ok else "false", file=out)
    return 0 if ok else 1


def cmd_phase_condition(args, out) -> int:
    ok, s, t = phase_condition_witness(args.n)
    if ok:
        print("true (s=%d, t=%d)" % (s, t), file=out)
        return 0
    print("false (s=%d, no t with 2^t = -1 mod s)" % s, file=out)
    return 1


def cmd_fn_census(args, out) -> int:
    max_n = args.max
    start_n = 2
    hits = 0
    mode = "w"
    if args.checkpoint and os.path.exists(args.checkpoint):
        with open(args.checkpoint) as fh:
            state = json.load(fh)
        if state.get("max") == max_n:
            start_n = state["next_n"]
            hits = state["hits"]
            mode = "a"
    sink = open(args.output, mode) if args.output else out

    def save_checkpoint(next_n: int, hits_now: int) -> None:
        if not args.checkpoint:
            return
        tmp = args.checkpoint + ".tmp"
        with open(tmp, "w") as fh:
            json.dump({"max": max_n, "next_n": next_n, "hits": hits_now}, fh)
        os.replace(tmp, args.checkpoint)

    try:
        if start_n <= max_n:
            for n, cond in iter_census(max_n, start_n):
                hits += 1 if cond else 0
                print("%d,%s" % (n, "true" if cond else "false"), file=sink)
                if args.checkpoint and n % CHECKPOINT_EVERY == 0:
                    sink.flush()
                    save_checkpoint(n + 2, hits)
        frac = Fraction(hits, max_n // 2)
        print("%d,%d,%d" % (max_n, frac.numerator, frac.denominator), file=sink)
        save_checkpoint(max_n + 2, hits)
    finally:
        if args.output:
            sink.close()
    return 0


def cmd_random(args, out) -> int:
    ctx = make_context(args.n)
    u, seq = random_unitary(ctx, args.target_tcount, args.seed)
    sink = open(args.output, "w") if args.output else out
    try:
        if args.format == "json":
            blob = {"matrix": matrix_to_json(u), "circuit": seq.to_text()}
            print(json.dumps(blob, sort_keys=True), file=sink)
        else:
            print(json.dumps(matrix_to_json(u), sort_keys=True), file=sink)
            print(seq.to_text(), file=sink)
        if args.approx:
            _print_approx(u, sink)
    finally:
        if args.output:
            sink.close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="cycsynth",
        description="Exact synthesis over Clifford + pi/n z-rotation gate sets.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def add_n(p, required=True):
        p.add_argument("--n", type=int, required=required,
                       help="gate-set parameter (positive even integer)")

    p = sub.add_parser("synth", help="optimal circuit for a matrix JSON")
    add_n(p)
    p.add_argument("--input", default="-", help="matrix JSON file, '-' for stdin; JSONL for batches")
    p.add_argument("--output", default=None)
    p.add_argument("--method", choices=("optimal", "ring"), default="optimal")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers for batch input")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--approx", action="store_true",
                   help="also print a decimal rendering (non-authoritative)")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("ringsynth", help="ring-level synthesis (n in %s)" % (RING_EQUALITY_NS,))
    add_n(p)
    p.add_argument("--input", default="-")
    p.set_defaults(func=cmd_ringsynth)

    p = sub.add_parser("verify", help="check a circuit against a matrix")
    add_n(p)
    p.add_argument("--circuit", required=True, help="circuit text file, '-' for stdin")
    p.add_argument("--matrix", required=True, help="matrix JSON file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("tcount", help="minimal W-count of a matrix")
    add_n(p)
    p.add_argument("--input", default="-")
    p.set_defaults(func=cmd_tcount)

    p = sub.add_parser("member", help="decide synthesizability")
    add_n(p)
    p.add_argument("--input", default="-")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_member)

    p = sub.add_parser("check-finite-lemma", help="exhaustive mod-2 residue check")
    add_n(p)
    p.set_defaults(func=cmd_check_finite_lemma)

    p = sub.add_parser("phase-condition", help="is -1 a power of 2 mod the odd part of n")
    add_n(p)
    p.set_defaults(func=cmd_phase_condition)

    p = sub.add_parser("fn-census", help="stream the phase-condition census as CSV")
    p.add_argument("--max", type=int, required=True, help="largest even n to include")
    p.add_argument("--output", default=None)
    p.add_argument("--checkpoint", default=None,
                   help="state file; reruns resume after an interruption")
    p.set_defaults(func=cmd_fn_census)

    p = sub.add_parser("random", help="emit a seeded random matrix + witness circuit")
    add_n(p)
    p.add_argument("--target-tcount", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", default=None)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--approx", action="store_true")
    p.set_defaults(func=cmd_random)

    return ap


def main(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args, out)
    except (ValueError, SynthesisError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        if isinstance(exc, SynthesisError):
            return 1
        return 2
    except IntegrityError as exc:
        print("integrity failure: %s" % exc, file=sys.stderr)
        return 3


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
