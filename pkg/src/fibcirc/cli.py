"""Command line front end.

Exit codes: 0 success, 1 usage error, 2 domain/validation error,
3 corruption detected.
"""

import argparse
import sys
import warnings

import numpy as np

from . import circulant, codec, polyseq, selftest
from .errors import (
    CorruptPacket,
    FallbackUsed,
    FibCircError,
    InvalidPacket,
    SingularDenominator,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DOMAIN = 2
EXIT_CORRUPT = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _number(text):
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _coeffs(text):
    try:
        return polyseq.Polynomial([_number(t) for t in text.split(",")])
    except (argparse.ArgumentTypeError, FibCircError) as exc:
        raise argparse.ArgumentTypeError(f"bad polynomial {text!r}: {exc}") from None


def _add_pq(p):
    p.add_argument("--p", type=_number, help="value of p(x)")
    p.add_argument("--q", type=_number, help="value of q(x)")
    p.add_argument("--p-poly", type=_coeffs, metavar="C0,C1,..", help="p as coefficients, constant first")
    p.add_argument("--q-poly", type=_coeffs, metavar="C0,C1,..", help="q as coefficients, constant first")
    p.add_argument("--x", type=_number, help="evaluation point for --p-poly/--q-poly")


def _resolve_pq(args):
    p, q = args.p, args.q
    if args.p_poly is not None or args.q_poly is not None:
        if args.x is None:
            raise polyseq.InvalidParameters("--x is required with --p-poly/--q-poly")
        if args.p_poly is not None:
            p = polyseq.eval_polynomial(args.p_poly, args.x)
        if args.q_poly is not None:
            q = polyseq.eval_polynomial(args.q_poly, args.x)
    if p is None or q is None:
        raise polyseq.InvalidParameters("p and q are required")
    return p, q


def _params(args, exact_ok=True):
    p, q = _resolve_pq(args)
    if exact_ok and isinstance(p, int) and isinstance(q, int):
        return polyseq.IntRecurrenceParams(p, q)
    return polyseq.RecurrenceParams(p, q)


def _fmt(v):
    if isinstance(v, complex):
        if abs(v.imag) < 1e-15 * max(1.0, abs(v.real)):
            return f"{v.real:.12g}"
        return f"{v.real:.12g}{v.imag:+.12g}j"
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def _deviation(closed, oracle):
    diff = abs(closed - oracle)
    rel = diff / abs(oracle) if oracle != 0 else diff
    return diff, rel


def _read_text(arg, stdin):
    if arg is None or arg == "-":
        return stdin.read()
    return arg


def cmd_encode(args, out):
    message = _read_text(args.message, sys.stdin)
    if args.message is None or args.message == "-":
        message = message.rstrip("\r\n")
    packet = codec.encode(message, args.alg)
    if args.format == "human":
        text = _packet_human(packet)
    else:
        text = codec.serialize_packet(packet) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    return EXIT_OK


def _packet_human(packet):
    lines = [
        f"algorithm: {packet.algorithm.value}",
        f"n: {packet.n}",
        f"b: {packet.b}",
        f"original_length: {packet.original_length}",
    ]
    for i, rec in enumerate(packet.records, start=1):
        lines.append(f"K{i} = [{' '.join(str(v) for v in (rec.d, *rec.retained))}]")
    return "\n".join(lines) + "\n"


def _load_packet(source):
    if source is None or source == "-":
        text = sys.stdin.read()
    else:
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    return codec.deserialize_packet(text)


def cmd_decode(args, out):
    packet = _load_packet(args.packet)
    try:
        message = codec.decode(packet)
    except CorruptPacket as exc:
        print(f"error: {exc}", file=sys.stderr)
        for line in codec.verify_packet(packet).lines():
            out.write(line + "\n")
        return EXIT_CORRUPT
    out.write(message + "\n")
    return EXIT_OK


def cmd_verify(args, out):
    packet = _load_packet(args.packet)
    report = codec.verify_packet(packet)
    for line in report.lines():
        out.write(line + "\n")
    return EXIT_OK if report.ok else EXIT_CORRUPT


def cmd_table(args, out):
    table = codec.CharTable(args.n)
    for ch, v in table.as_dict().items():
        out.write(f"{ch} {v}\n")
    return EXIT_OK


def cmd_seq(args, out):
    params = _params(args)
    values = (polyseq.lucas_seq if args.lucas else polyseq.fibonacci_seq)(params, args.count)
    out.write(" ".join(_fmt(v) for v in values) + "\n")
    return EXIT_OK


def _ratio_params(args):
    params = _params(args, exact_ok=False)
    if args.a is None or args.r is None:
        raise polyseq.InvalidParameters("--a and --r are required for the F matrix")
    return circulant.RatioCirculantParams(params, args.a, args.r, args.n)


def cmd_det(args, out):
    if args.matrix == "F":
        rp = _ratio_params(args)
        closed = circulant.det_closed_F(rp)
        oracle = circulant.det_bruteforce(circulant.build_F_matrix(rp).to_rows())
        note = None
    else:
        params = _params(args)
        build = circulant.build_G_matrix if args.matrix == "G" else circulant.build_H_matrix
        closed_fn = circulant.det_closed_G if args.matrix == "G" else circulant.det_closed_H
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", FallbackUsed)
            closed = closed_fn(params, args.n)
        note = str(caught[0].message) if caught else None
        oracle = circulant.det_bruteforce(build(params, args.n).to_rows())
    diff, rel = _deviation(closed, oracle)
    out.write(f"matrix: {args.matrix}_{args.n}\n")
    out.write(f"closed: {_fmt(closed)}\n")
    out.write(f"oracle: {_fmt(oracle)}\n")
    out.write(f"abs deviation: {_fmt(diff)}\n")
    out.write(f"rel deviation: {_fmt(rel)}\n")
    if note:
        out.write(f"note: {note}\n")
    return EXIT_OK


def cmd_eig(args, out):
    rp = _ratio_params(args)
    closed = circulant.eigenvalues_closed_F(rp)
    oracle = circulant.eigenvalues_dft(circulant.build_F_matrix(rp))
    out.write(f"closed: [{', '.join(_fmt(v) for v in closed)}]\n")
    out.write(f"oracle: [{', '.join(_fmt(v) for v in oracle)}]\n")
    diffs = np.abs(closed.to_array() - oracle.to_array())
    rels = [_deviation(c, o)[1] for c, o in zip(closed, oracle)]
    out.write(f"max abs deviation: {_fmt(float(diffs.max()))}\n")
    out.write(f"max rel deviation: {_fmt(float(max(rels)))}\n")
    return EXIT_OK


def cmd_selftest(args, out):
    results = selftest.run_all(seed=args.seed, max_n=args.max_n)
    total = sum(r.seconds for r in results)
    for r in results:
        out.write(r.line() + "\n")
    passed = sum(r.passed for r in results)
    out.write(f"{passed}/{len(results)} suites passed in {total:.2f}s\n")
    return EXIT_OK if passed == len(results) else EXIT_DOMAIN


def build_parser():
    parser = _Parser(prog="fibcirc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("encode", help="encode a message into a packet")
    p.add_argument("message", nargs="?", help="message text; read from stdin when omitted or '-'")
    p.add_argument("--alg", choices=["fib3", "lucas2"], default="fib3")
    p.add_argument("--format", choices=["packet", "human"], default="packet")
    p.add_argument("-o", "--output", help="write to this file instead of stdout")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="decode a packet back to the message")
    p.add_argument("packet", nargs="?", help="packet file; stdin when omitted or '-'")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("verify", help="per-block integrity report for a packet")
    p.add_argument("packet", nargs="?", help="packet file; stdin when omitted or '-'")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("table", help="print the character table for offset n")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("seq", help="print F_0.. or L_0.. for (p, q)")
    _add_pq(p)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--lucas", action="store_true")
    p.set_defaults(func=cmd_seq)

    p = sub.add_parser("det", help="closed-form determinant vs elimination")
    p.add_argument("--matrix", choices=["F", "G", "H"], required=True)
    _add_pq(p)
    p.add_argument("--a", type=float)
    p.add_argument("--r", type=float)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_det)

    p = sub.add_parser("eig", help="closed-form eigenvalues of F_n vs DFT sum")
    _add_pq(p)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_eig)

    p = sub.add_parser("selftest", help="run the seeded verification suites")
    p.add_argument("--seed", type=int, default=selftest.DEFAULT_SEED)
    p.add_argument("--max-n", type=int, default=12)
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except CorruptPacket as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CORRUPT
    except (InvalidPacket, SingularDenominator, FibCircError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
