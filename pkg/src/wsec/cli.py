"""Command-line front end.

Every subcommand reads and writes the line-oriented text formats defined by
the library, so outputs of one stage feed directly into the next:

    wsec gen-outer --construction 2 --n 4 --k 2 --d 3 --alpha 2 --q 5 --out outer.txt
    wsec gen-inner --n 4 --k 2 --d 3 --alpha 2 --beta 2 --q 5 --out inner.txt
    wsec encode --outer outer.txt --inner inner.txt --message msg.txt --out-dir shares/
    wsec verify --outer outer.txt --inner inner.txt --l 1 --g 2

Exit status: 0 on success (and on a secure verdict), 2 when `verify` finds
the pair insecure, 1 on usage or data errors.
"""

from __future__ import annotations

import argparse
import os
import re
import sys

from . import coset, report, security, storage
from .errors import FormatError, WsecError

__all__ = ["main"]


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _threads_hint() -> int:
    raw = os.environ.get("WSEC_THREADS", "")
    if not raw:
        return 1
    try:
        val = int(raw)
        if val < 1:
            raise ValueError
    except ValueError:
        print(f"warning: ignoring invalid WSEC_THREADS={raw!r}", file=sys.stderr)
        return 1
    return val


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _int_list(raw: str, what: str) -> list[int]:
    try:
        return [int(tok) for tok in raw.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise _UsageError(f"{what} must be a comma-separated integer list") from exc


def _build_parser() -> _Parser:
    p = _Parser(prog="wsec", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("gen-outer", help="generate an outer coset code")
    sp.add_argument("--construction", required=True, choices=["1", "2", "identity"])
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--alpha", type=int, required=True)
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--max-field", type=int, default=coset.DEFAULT_MAX_FIELD)
    sp.add_argument("--out")

    sp = sub.add_parser("gen-inner", help="generate a striped inner storage code")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--alpha", type=int, required=True)
    sp.add_argument("--beta", type=int, required=True)
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--out")

    sp = sub.add_parser("encode", help="encode a message file into node shares")
    sp.add_argument("--outer", required=True)
    sp.add_argument("--inner", required=True)
    sp.add_argument("--message", required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out-dir", required=True)

    sp = sub.add_parser("decode", help="recover the message from k node shares")
    sp.add_argument("--outer", required=True)
    sp.add_argument("--inner", required=True)
    sp.add_argument("--shares", nargs="+", required=True)
    sp.add_argument("--out")

    sp = sub.add_parser("eavesdrop", help="collect observed shares into one view")
    sp.add_argument("--shares", nargs="+", required=True)
    sp.add_argument("--nodes", required=True,
                    help="comma-separated node ids matching the share files")
    sp.add_argument("--out")

    sp = sub.add_parser("verify", help="decide weak security for given l and g")
    sp.add_argument("--outer", required=True)
    sp.add_argument("--inner", required=True)
    sp.add_argument("--l", dest="ell", type=int, required=True)
    sp.add_argument("--g", type=int, required=True)
    sp.add_argument("--mode", choices=["exhaustive", "sampled"], default="exhaustive")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--budget", type=int, default=security.DEFAULT_SAMPLE_BUDGET)

    sp = sub.add_parser("report", help="survey security across adversary sizes")
    sp.add_argument("--outer", required=True)
    sp.add_argument("--inner", required=True)
    sp.add_argument("--out", help="prefix: writes <prefix>.tsv and PNG figures")

    sp = sub.add_parser("bounds", help="print message-capacity bounds")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--alpha", type=int, required=True)
    sp.add_argument("--beta", type=int, required=True)
    sp.add_argument("--l", dest="ell", type=int, required=True)

    sp = sub.add_parser("mi-oracle",
                        help="cross-check the rank criterion by enumeration")
    sp.add_argument("--outer", required=True)
    sp.add_argument("--inner", required=True)
    sp.add_argument("--nodes", required=True)
    sp.add_argument("--group", required=True)
    sp.add_argument("--cap", type=int, default=security.DEFAULT_ORACLE_CAP)
    sp.add_argument("--bits", action="store_true",
                    help="also print the value converted to bits")
    return p


def _cmd_gen_outer(args) -> int:
    if args.construction == "1":
        code = coset.construct1(args.n, args.k, args.d, args.alpha, args.q,
                                max_field=args.max_field)
    elif args.construction == "2":
        code = coset.construct2(args.n, args.k, args.d, args.alpha, args.q,
                                max_field=args.max_field)
    else:
        code = coset.construct_identity(args.n, args.k, args.d, args.alpha, args.q)
    _emit(coset.format_coset(code), args.out)
    return 0


def _cmd_gen_inner(args) -> int:
    spec = storage.StorageCodeSpec(args.n, args.k, args.d, args.alpha,
                                   args.beta, args.q)
    code = storage.make_striped_mds(spec)
    _emit(storage.format_storage(code), args.out)
    return 0


_NODE_RE = re.compile(r"^NODE i=(\d+)$")


def format_share(node: int, share) -> str:
    return f"NODE i={node}\n" + coset.format_vector(share)


def parse_share(text: str) -> tuple[int, tuple]:
    lines = text.splitlines()
    if not lines:
        raise FormatError("empty share file")
    m = _NODE_RE.match(lines[0])
    if not m:
        raise FormatError("share file must start with 'NODE i=<id>'")
    return int(m.group(1)), coset.parse_vector("\n".join(lines[1:]))


_VIEW_RE = re.compile(r"^VIEW nodes=([\d,]+)$")


def format_view(nodes, rows) -> str:
    from .linalg import FMatrix, format_matrix

    head = "VIEW nodes=" + ",".join(str(i) for i in nodes)
    rows = [tuple(r) for r in rows]
    tower = rows[0][0].tower
    return head + "\n" + format_matrix(FMatrix(tower, rows, cols=len(rows[0])))


def parse_view(text: str) -> tuple[tuple[int, ...], list[tuple]]:
    from .linalg import parse_matrix

    lines = text.splitlines()
    if not lines:
        raise FormatError("empty view file")
    m = _VIEW_RE.match(lines[0])
    if not m:
        raise FormatError("view file must start with 'VIEW nodes=<ids>'")
    nodes = tuple(int(tok) for tok in m.group(1).split(","))
    mat = parse_matrix("\n".join(lines[1:]))
    if mat.rows != len(nodes):
        raise FormatError("view row count disagrees with the node list")
    return nodes, [tuple(row) for row in mat.data]


def _cmd_encode(args) -> int:
    outer = coset.parse_coset(_read(args.outer))
    inner = storage.parse_storage(_read(args.inner))
    message = coset.parse_vector(_read(args.message))
    stored = outer.encode(message, seed=args.seed)
    shares = storage.storage_encode(inner, stored)
    os.makedirs(args.out_dir, exist_ok=True)
    for i, share in enumerate(shares, start=1):
        path = os.path.join(args.out_dir, f"node-{i:02d}.txt")
        _emit(format_share(i, share), path)
    print(f"wrote {len(shares)} share files to {args.out_dir}")
    return 0


def _cmd_decode(args) -> int:
    outer = coset.parse_coset(_read(args.outer))
    inner = storage.parse_storage(_read(args.inner))
    loaded = sorted(parse_share(_read(path)) for path in args.shares)
    k = inner.spec.k
    if len(loaded) < k:
        raise WsecError(f"need at least k={k} share files, got {len(loaded)}")
    use = loaded[:k]
    stored = storage.reconstruct(inner, [i for i, _ in use],
                                 [s for _, s in use])
    message = outer.decode(stored)
    _emit(coset.format_vector(message), args.out)
    return 0


def _cmd_eavesdrop(args) -> int:
    nodes = _int_list(args.nodes, "--nodes")
    if len(nodes) != len(args.shares):
        raise _UsageError("--nodes must list one id per share file")
    shares = {}
    for node, path in zip(nodes, args.shares):
        file_node, vec = parse_share(_read(path))
        if file_node != node:
            raise WsecError(f"share file {path} belongs to node {file_node}, "
                            f"not {node}")
        shares[node] = vec
    ordered = sorted(shares)
    if len(ordered) != len(nodes):
        raise WsecError("observed nodes must be distinct")
    _emit(format_view(ordered, [shares[i] for i in ordered]), args.out)
    return 0


def _cmd_verify(args) -> int:
    outer = coset.parse_coset(_read(args.outer))
    inner = storage.parse_storage(_read(args.inner))
    rep = security.is_weakly_secure(outer, inner, args.ell, args.g,
                                    mode=args.mode, seed=args.seed,
                                    budget=args.budget,
                                    threads=_threads_hint())
    sys.stdout.write(security.format_report(rep))
    return 0 if rep.secure else 2


def _cmd_report(args) -> int:
    outer = coset.parse_coset(_read(args.outer))
    inner = storage.parse_storage(_read(args.inner))
    sv = report.survey(outer, inner, threads=_threads_hint())
    sys.stdout.write(report.format_table(sv))
    if args.out:
        _emit(report.format_table(sv, comment_topfield=True), args.out + ".tsv")
        paths = report.render_figures(sv, args.out)
        for path in [args.out + ".tsv"] + paths:
            print(f"wrote {path}")
    return 0


def _cmd_bounds(args) -> int:
    if not 1 <= args.k <= args.n:
        raise _UsageError("need 1 <= k <= n")
    if not args.k - 1 <= args.d <= args.n - 1:
        raise _UsageError("need k-1 <= d <= n-1")
    b_bound, bs_bound = storage.bounds_from_params(args.k, args.d, args.alpha,
                                                   args.beta, args.ell)
    print(f"B<={b_bound} Bs<={bs_bound}")
    return 0


def _cmd_mi_oracle(args) -> int:
    outer = coset.parse_coset(_read(args.outer))
    inner = storage.parse_storage(_read(args.inner))
    nodes = tuple(_int_list(args.nodes, "--nodes"))
    group = tuple(_int_list(args.group, "--group"))
    gp = security.adversary_matrix(outer, inner, nodes)
    mi = security.mi_oracle(outer.h, gp, group, cap=args.cap)
    leak = security.leakage(security.group_rows(outer, group), gp)
    print(f"MI {mi} symbols")
    if args.bits:
        import math

        bits = float(mi) * math.log2(outer.tower.order)
        print(f"MI {bits:.6f} bits")
    print(f"LEAKAGE {leak} symbols")
    agree = mi == leak
    print(f"AGREE {'yes' if agree else 'no'}")
    return 0 if agree else 1


_COMMANDS = {
    "gen-outer": _cmd_gen_outer,
    "gen-inner": _cmd_gen_inner,
    "encode": _cmd_encode,
    "decode": _cmd_decode,
    "eavesdrop": _cmd_eavesdrop,
    "verify": _cmd_verify,
    "report": _cmd_report,
    "bounds": _cmd_bounds,
    "mi-oracle": _cmd_mi_oracle,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (WsecError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
