"""Command-line interface: ``mik <subcommand> ...``.

Exit codes: 0 success (CERTIFIED for ``certify``), 1 NON-REALIZABLE,
2 INCONCLUSIVE or search exhausted, 3 bad input.
"""

import argparse
import json
import re
import sys
from fractions import Fraction

import mpmath
import numpy as np

from . import angles
from .angles import Angle
from .certificate import CERTIFIED, INCONCLUSIVE, NON_REALIZABLE, certify
from .ellipsoid import EllipsoidSpec, Irrational, ellipsoid_system, sqrt_text
from .errors import MikError
from .io import Table, emit_block, emit_report, emit_system, parse_block, parse_system, _plain
from .iteration import index_table, is_nondegenerate, mbar, nullity_at
from .jump import SearchExhausted, conjugate_pair, scan_tuples, verify_tuple
from .morse import euler_hat, morse_inequality, morse_numbers
from .normal_form import NormalFormDecomposition, spectrum_on_circle, validate_symplectic
from .splitting import block_splitting, circle_splitting, oracle_splitting, splitting_at

EXIT_OK, EXIT_NONREALIZABLE, EXIT_INCONCLUSIVE, EXIT_INPUT = 0, 1, 2, 3
VERDICT_EXIT = {CERTIFIED: EXIT_OK, NON_REALIZABLE: EXIT_NONREALIZABLE,
                INCONCLUSIVE: EXIT_INCONCLUSIVE}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


class InputError(MikError):
    pass


# -- argument parsing helpers ----------------------------------------------------

def _range(text):
    m = re.fullmatch(r"\s*(-?\d+)\s*(?:\.\.\s*(-?\d+))?\s*", text)
    if not m:
        raise argparse.ArgumentTypeError(f"expected LO..HI, got {text!r}")
    if m.group(2) is None:
        return 1, int(m.group(1))
    lo, hi = int(m.group(1)), int(m.group(2))
    if hi < lo:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return lo, hi


def _count(text):
    """Integers written as 10000000, 1e7 or 10**7."""
    t = text.strip().replace("_", "")
    m = re.fullmatch(r"(\d+)\*\*(\d+)", t)
    try:
        value = int(m.group(1)) ** int(m.group(2)) if m else int(Fraction(t))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return value


def _eps(text):
    if text == "auto":
        return None
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0 < value < 0.5:
        raise argparse.ArgumentTypeError("eps must lie in (0, 1/2)")
    return value


_PI = re.compile(r"(-?\d+)?\s*(?:/\s*(\d+))?\s*\*?\s*pi(?:\s*/\s*(\d+))?")


def parse_omega(text):
    """A unit-circle point: 1, -1, '2/3pi', 'pi/3', 'rational:2/3', 'irrational:1.234' or a JSON angle."""
    t = text.strip()
    if t in ("1", "+1"):
        return 1
    if t == "-1":
        return -1
    if t.startswith("{"):
        from .io import parse_angle
        return parse_angle(json.loads(t), "omega")
    if t.startswith("rational:"):
        return Angle.rational(Fraction(t.split(":", 1)[1]))
    if t.startswith("irrational:"):
        return Angle.irrational(t.split(":", 1)[1])
    m = _PI.fullmatch(t)
    if m and not (m.group(2) and m.group(3)):
        num = int(m.group(1) or 1)
        den = int(m.group(2) or m.group(3) or 1)
        return Angle.rational(num, den)
    raise InputError(f"cannot read omega {text!r}")


def _load_block(text):
    try:
        return parse_block(json.loads(text), "block")
    except json.JSONDecodeError as exc:
        raise InputError(f"block is not valid JSON: {exc.msg}") from None


def _read_system(path):
    if path == "-":
        return parse_system(sys.stdin.read())
    with open(path, encoding="utf-8") as fh:
        return parse_system(fh.read())


def _radius(token, bits):
    t = token.strip()
    m = re.fullmatch(r"(?:(\d+(?:/\d+)?)\*)?sqrt\(?(\d+)\)?", t)
    if m:
        return Irrational(sqrt_text(int(m.group(2)), bits, Fraction(m.group(1) or 1)))
    if re.fullmatch(r"-?\d+(/\d+)?", t):
        return Fraction(t)
    # any other decimal is taken as an irrational number written to some precision
    Fraction(t)
    return Irrational(t)


# -- subcommands ------------------------------------------------------------------

def cmd_normal_form(args):
    blocks = [_load_block(b) for b in args.block]
    d = NormalFormDecomposition.of(*blocks)
    m = d.matrix()
    ok, residual = validate_symplectic(m)
    ctx = m.ctx
    matrix = [[ctx.nstr(m[i, j], args.digits) for j in range(m.cols)] for i in range(m.rows)]
    if args.format == "tsv":
        return Table([f"c{j + 1}" for j in range(m.cols)], matrix), EXIT_OK
    spectrum = [{"point": _plain(p), "nu": nu} for p, nu in spectrum_on_circle(d).items()]
    report = {
        "n": d.n,
        "blocks": [emit_block(b) for b in blocks],
        "matrix": matrix,
        "symplectic": ok,
        "residual": ctx.nstr(residual, 5),
        "spectrum_on_circle": spectrum,
        "s_plus_at_1": splitting_at(d, 1).s_plus,
        "circle_splitting": [{"theta": _plain(t), "s_minus": s} for t, s in circle_splitting(d)],
    }
    return report, EXIT_OK


def cmd_splitting(args):
    block = _load_block(args.block)
    omega = parse_omega(args.omega)
    if args.source == "oracle":
        pair = oracle_splitting(block, omega, seed=args.seed or 0)
    else:
        pair = block_splitting(block, omega)
    return {"s_plus": pair.s_plus, "s_minus": pair.s_minus, "source": args.source}, EXIT_OK


def cmd_index(args):
    records, n = _read_system(args.system)
    lo, hi = args.m_range
    if lo < 1:
        raise InputError("iterates start at m = 1")
    shift = n if args.grading == "viterbo" else 0
    rows = []
    for r in records:
        table = index_table(r, hi)
        for m in range(lo, hi + 1):
            rows.append([r.label, m, int(table[m - 1]) - shift, nullity_at(r, m)])
    return Table(["label", "m", "i", "nu"], rows), EXIT_OK


def cmd_mean(args):
    records, n = _read_system(args.system)
    rows = []
    for r in records:
        nondeg = is_nondegenerate(r)
        rows.append([r.label, r.i1, r.s_plus_one, r.c, mpmath.nstr(r.mean, args.digits),
                     r.mean_exact if r.mean_exact is not None else "",
                     euler_hat(r) if nondeg and r.mean > 0 else "", nondeg])
    return Table(["label", "i1", "S_plus", "C", "mean", "mean_exact", "chi_hat",
                  "nondegenerate"], rows), EXIT_OK


def cmd_jump(args):
    records, n = _read_system(args.system)
    mb = args.mbar or mbar(records, n)
    res = scan_tuples(records, mb, args.eps, args.nmax, want=args.want, threads=args.threads)
    out = {"mbar": mb, "eps": args.eps, "nmax": args.nmax, "scanned": res.scanned, "tuples": []}
    for t in res:
        v = verify_tuple(records, t, mb)
        out["tuples"].append({**t.as_dict(), "verification": {
            "passed": v.passed, "checks": len(v.checks), "summary": v.summary()}})
    if len(res) < args.want:
        # fewer tuples than requested below nmax counts as an exhausted search
        out["exhausted"] = True
        out["near_miss"] = res.near_miss
        return out, EXIT_INCONCLUSIVE
    if args.conjugate:
        try:
            _, tc = conjugate_pair(records, res[0], mb, args.eps, args.nmax, threads=args.threads)
        except SearchExhausted as exc:
            out["conjugate"] = {"found": False, "reason": str(exc), "near_miss": exc.near_miss}
            return out, EXIT_INCONCLUSIVE
        else:
            v = verify_tuple(records, tc, mb)
            out["conjugate"] = {"found": True, "of": res[0].N, **tc.as_dict(),
                                "verification": {"passed": v.passed, "summary": v.summary()}}
    return out, EXIT_OK


def cmd_morse(args):
    records, n = _read_system(args.system)
    lo, hi = args.window
    # the coefficients u_p need every M_p from the index floor upwards
    full = morse_numbers(records, (min(lo, 0) - 10 ** 9, hi))
    if lo < full.floor:
        print(f"notice: window start {lo} clipped to the index floor {full.floor}",
              file=sys.stderr)
    rows = []
    for p in range(max(lo, full.floor), hi + 1):
        u = morse_inequality(full, p).u
        rows.append([p, full.morse.get(p, 0), full.betti.get(p, 0), u])
    return Table(["p", "M_p", "b_p", "u_p"], rows), EXIT_OK


def cmd_certify(args):
    records, n = _read_system(args.system)
    rep = certify(records, n, n_max=args.nmax, eps=args.eps, threads=args.threads)
    return rep, VERDICT_EXIT[rep.verdict]


def cmd_ellipsoid(args):
    bits = angles.working_precision()
    if args.sq_radii:
        radii = [_radius(t, bits) for t in args.sq_radii.split(",")]
        spec = EllipsoidSpec(args.n, radii)
        how = f"squared radii {args.sq_radii}"
    elif args.seed is not None:
        spec = EllipsoidSpec.random(args.n, np.random.default_rng(args.seed), bits)
        how = f"random squared radii, seed {args.seed}"
    else:
        spec = EllipsoidSpec.sqrt_primes(args.n, bits)
        how = "squared radii sqrt of the first primes"
    records = ellipsoid_system(spec)
    text = emit_system(records, args.n, f"irrational ellipsoid, n = {args.n}, {how}")
    if args.emit:
        with open(args.emit, "w", encoding="utf-8") as fh:
            fh.write(text)
        return {"written": args.emit, "orbits": [r.label for r in records]}, EXIT_OK
    return text, EXIT_OK


COMMANDS = {
    "normal-form": cmd_normal_form,
    "splitting": cmd_splitting,
    "index": cmd_index,
    "mean": cmd_mean,
    "jump": cmd_jump,
    "morse": cmd_morse,
    "certify": cmd_certify,
    "ellipsoid": cmd_ellipsoid,
}


def _global_options(p, defaults):
    def val(x):
        return x if defaults else argparse.SUPPRESS
    p.add_argument("--format", choices=("json", "tsv"), default=val(None),
                   help="output format (default: tsv for tables, json otherwise)")
    p.add_argument("--precision", type=int, default=val(None), metavar="BITS",
                   help="working precision in bits (>= 128)")
    p.add_argument("--seed", type=int, default=val(None), help="seed for random generation")
    p.add_argument("--threads", type=int, default=val(1), help="worker threads for searches")


def build_parser():
    parser = _Parser(prog="mik", description="Index iteration and multiplicity certificates "
                     "for closed characteristics.")
    _global_options(parser, True)
    common = _Parser(add_help=False)
    _global_options(common, False)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("normal-form", parents=[common], help="build a diamond sum of blocks")
    p.add_argument("--block", action="append", required=True,
                   help="JSON block (repeat to form a diamond sum)")
    p.add_argument("--digits", type=int, default=20)

    p = sub.add_parser("splitting", parents=[common], help="splitting numbers of a block")
    p.add_argument("--block", required=True)
    p.add_argument("--omega", required=True, help="1, -1, 2/3pi, rational:2/3, irrational:<rad>")
    p.add_argument("--source", choices=("table", "oracle"), default="table")

    p = sub.add_parser("index", parents=[common], help="iterate index table")
    p.add_argument("--system", required=True)
    p.add_argument("--m-range", type=_range, default=(1, 10))
    p.add_argument("--grading", choices=("maslov", "viterbo"), default="maslov")

    p = sub.add_parser("mean", parents=[common], help="mean indices and average Euler characteristics")
    p.add_argument("--system", required=True)
    p.add_argument("--digits", type=int, default=30)

    p = sub.add_parser("jump", parents=[common], help="search common index jump tuples")
    p.add_argument("--system", required=True)
    p.add_argument("--eps", type=_eps, default=0.05)
    p.add_argument("--nmax", type=_count, default=10 ** 7)
    p.add_argument("--want", type=_count, default=3)
    p.add_argument("--mbar", type=_count, default=None, help="override the computed m-bar")
    p.add_argument("--conjugate", action="store_true",
                   help="also search a tuple with complementary offsets")

    p = sub.add_parser("morse", parents=[common], help="Morse numbers and inequality coefficients")
    p.add_argument("--system", required=True)
    p.add_argument("--window", type=_range, default=(-10, 200))

    p = sub.add_parser("certify", parents=[common], help="run the multiplicity certificate")
    p.add_argument("--system", required=True)
    p.add_argument("--nmax", type=_count, default=10 ** 8)
    p.add_argument("--eps", type=_eps, default=None)

    p = sub.add_parser("ellipsoid", parents=[common], help="emit an irrational ellipsoid system")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--sq-radii", default=None, help="comma list: sqrt2, 3/2*sqrt5, 7/3, 1.414...")
    p.add_argument("--emit", default=None, metavar="FILE")
    return parser


def _render(result, fmt):
    if isinstance(result, str):
        return result
    if fmt is None:
        fmt = "tsv" if isinstance(result, Table) else "json"
    return emit_report(result, fmt)


_RANGE_OPTIONS = ("--window", "--m-range")


def _join_ranges(argv):
    # "--window -10..200" would otherwise read -10..200 as an option
    out, i = [], 0
    while i < len(argv):
        if argv[i] in _RANGE_OPTIONS and i + 1 < len(argv):
            out.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(_join_ranges(sys.argv[1:] if argv is None else list(argv)))
    try:
        if args.precision is not None:
            angles.set_precision(args.precision)
        if args.threads < 1:
            raise InputError("--threads must be at least 1")
        result, code = COMMANDS[args.command](args)
    except (MikError, ValueError, OSError) as exc:
        print(f"mik {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(_render(result, args.format))
    return code


if __name__ == "__main__":
    sys.exit(main())
