"""Command-line front end: ``relgw {ring|graphs|quantum|virasoro} ...``.

Every command builds a JSON-ready payload and a text rendering of it; the
``--format`` flag picks one.  Exit codes: 0 success, 2 malformed input,
3 window overflow, 4 a verification found a mismatch, 5 a z-window margin
is too small for the requested check.
"""
from __future__ import annotations

import argparse
import configparser
import json
import sys
from itertools import combinations_with_replacement

from . import givental as gv
from .cycleclasses import C_G
from .graphs import BipartiteGraph, TopType, automorphism_order, enumerate_graphs, virtual_dim
from .insertions import InsertionParseError, InsertionRing, WindowError, basis_label
from .quantum import (
    UNSUPPORTED, SmallProvider, Unsupported, check_trr, check_wdvv, compare_with_oracle,
    format_query, frac_str, invariant, quantum_product_small, solve_structure_constants,
)

EXIT_OK, EXIT_INPUT, EXIT_WINDOW, EXIT_MISMATCH, EXIT_MARGIN = 0, 2, 3, 4, 5
DEFAULTS = {"n": 2, "window": 4, "qmax": 3, "zmin": -6, "zmax": 6, "format": "text"}


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


class Result:
    """Payload plus text and exit code of one command."""

    def __init__(self, payload, text: str, code: int = EXIT_OK):
        self.payload, self.text, self.code = payload, text, code


def terms_json(u) -> dict:
    return {basis_label(x): frac_str(c) for x, c in sorted(u.terms.items())}


def parse_ins(ring: InsertionRing, text: str):
    try:
        return ring.parse(text)
    except InsertionParseError as exc:
        raise CliError(f"cannot parse {text!r}: {exc}", EXIT_INPUT)


def parse_item(ring: InsertionRing, text: str):
    """``[psi^a:]expr`` as ``(a, InsClass)``."""
    a = 0
    if text.startswith("psi"):
        head, _, text = text.partition(":")
        try:
            a = int(head[4:]) if head.startswith("psi^") else 1
        except ValueError:
            raise CliError(f"bad psi power in {head!r}", EXIT_INPUT)
    return a, parse_ins(ring, text)


# -- ring ---------------------------------------------------------------------------

def cmd_ring(args) -> Result:
    ring = InsertionRing(args.n, args.window)
    if args.action == "mult":
        u, v = (parse_ins(ring, e) for e in _exactly(args.exprs, 2))
        out = ring.product(u, v)
        return Result({"product": terms_json(out)}, str(out))
    if args.action == "pair":
        u, v = (parse_ins(ring, e) for e in _exactly(args.exprs, 2))
        val = ring.pairing(u, v)
        return Result({"pairing": frac_str(val)}, frac_str(val))
    if args.action == "degree":
        rows = []
        for e in args.exprs:
            try:
                d = ring.bidegree(parse_ins(ring, e))
            except ValueError as exc:
                raise CliError(str(exc), EXIT_INPUT)
            rows.append({"expr": e, "deg1": d.deg1, "deg2": frac_str(d.deg2)})
        return Result({"degrees": rows}, "\n".join(f"{r['expr']}: ({r['deg1']}, {r['deg2']})" for r in rows))
    rows = []
    basis = ring.basis()
    for k, x in enumerate(basis):
        for y in basis[k:]:
            rows.append({"lhs": basis_label(x), "rhs": basis_label(y),
                         "product": {basis_label(z): frac_str(c)
                                     for z, c in sorted(ring.product_basis(x, y).items())}})
    text = "\n".join(f"{r['lhs']} * {r['rhs']} = {_fmt(r['product'])}" for r in rows)
    return Result({"n": ring.n, "W": ring.W, "table": rows}, text)


def _exactly(items, k):
    if len(items) != k:
        raise CliError(f"expected {k} insertion expressions, got {len(items)}", EXIT_INPUT)
    return items


def _fmt(d: dict) -> str:
    return " + ".join(f"{c}*{lab}" if c != "1" else lab for lab, c in d.items()) or "0"


# -- graphs ---------------------------------------------------------------------------

def parse_type(args) -> TopType:
    try:
        mu = tuple(int(s) for s in args.mu.split(",") if s.strip())
    except ValueError:
        raise CliError(f"malformed contact orders {args.mu!r}", EXIT_INPUT)
    top = TopType(args.legs, args.degree, mu)
    try:
        top.check()
    except ValueError as exc:
        raise CliError(str(exc), EXIT_INPUT)
    return top


def graph_record(G: BipartiteGraph, n_amb: int) -> dict:
    return {"graph": G.to_dict(), "aut": automorphism_order(G), "C_G": C_G(G, n_amb).to_json()}


def cmd_graphs(args) -> Result:
    if args.action == "class" and args.graph:
        try:
            with open(args.graph) as fh:
                G = BipartiteGraph.from_dict(json.load(fh))
        except (OSError, ValueError, KeyError) as exc:
            raise CliError(f"cannot read graph: {exc}", EXIT_INPUT)
        rec = graph_record(G, args.n)
        return Result(rec, str(C_G(G, args.n)))
    top = parse_type(args)
    vdim = virtual_dim(top, args.n)
    if args.action == "vdim":
        return Result({"virtual_dim": vdim}, str(vdim))
    graphs = enumerate_graphs(top, args.n)
    recs = [graph_record(G, args.n) for G in graphs]
    payload = {"type": {"legs": top.n_legs, "degree": top.degree, "mu": list(top.mu)},
               "virtual_dim": vdim, "graphs": recs}
    lines = [f"type legs={top.n_legs} degree={top.degree} mu={list(top.mu)}  vdim={vdim}  "
             f"graphs={len(graphs)}"]
    for k, G in enumerate(graphs):
        lines.append(f"#{k}  |Aut|={automorphism_order(G)}  C_G = {C_G(G, args.n)}")
        if args.action == "enumerate":
            lines.append("    " + G.to_json())
    return Result(payload, "\n".join(lines))


# -- quantum ---------------------------------------------------------------------------

def _provider(args):
    if args.source == "solver":
        return SmallProvider(args.n, solve_structure_constants(args.n, args.window, args.qmax))
    return SmallProvider(args.n)


def cmd_quantum(args) -> Result:
    ring = InsertionRing(args.n, args.window)
    if args.action == "product":
        u, v = (parse_ins(ring, e) for e in _exactly(args.items, 2))
        s = quantum_product_small(u, v, args.qmax)
        payload = {"product": [{"q": m, "coeffs": terms_json(s[m])} for m in sorted(s.comps)]}
        return Result(payload, str(s))
    if args.action in ("table", "verify"):
        table = solve_structure_constants(args.n, args.window, args.qmax)
        if args.action == "table":
            d = table.to_dict()
            lines = [f"{e['lhs']} * {e['rhs']} q^{e['q']}: {e['status']} {_fmt(e['coeffs'])}"
                     for e in d["entries"]]
            return Result(d, "\n".join(lines))
        rep = compare_with_oracle(table)
        ok = not rep["mismatches"]
        text = (f"{'OK' if ok else 'MISMATCH'} (entries: {rep['entries']}, determined: "
                f"{rep['determined']}, undetermined: {rep['undetermined']}, out_of_window: "
                f"{rep['out_of_window']}, mismatches: {len(rep['mismatches'])})")
        return Result(rep, text, EXIT_OK if ok else EXIT_MISMATCH)
    if args.action == "threepoint":
        items = [(0, parse_ins(ring, e)) for e in _exactly(args.items, 3)]
        try:
            val = invariant(_provider(args), args.beta, items)
        except Unsupported as exc:
            return Result({"beta": args.beta, "value": UNSUPPORTED, "reason": str(exc)}, UNSUPPORTED)
        return Result({"beta": args.beta, "value": frac_str(val)}, frac_str(val))
    return _identity_report(args, ring)


def _identity_report(args, ring: InsertionRing) -> Result:
    """WDVV or TRR on explicit insertions, or swept over small basis tuples."""
    provider = _provider(args)
    check = check_wdvv if args.action == "wdvv" else check_trr
    if args.items:
        items = [parse_item(ring, e) for e in args.items]
        cases = [(args.beta, tuple((a, x) for (a, u) in items for x in [_single(u)]))]
    else:
        cases = _sweep(args, ring)
    rows, bad, unsupported = [], 0, 0
    for beta, q in cases:
        try:
            val = check(provider, beta, q)
        except ValueError as exc:
            raise CliError(str(exc), EXIT_INPUT)
        if val == UNSUPPORTED:
            unsupported += 1
            continue
        if val:
            bad += 1
        rows.append({"beta": beta, "query": format_query(q), "residual": frac_str(val)})
    ok = bad == 0
    payload = {"identity": args.action, "checked": len(rows), "unsupported": unsupported,
               "nonzero": bad, "cases": rows}
    text = (f"{args.action}: {'residual 0' if ok else 'NONZERO residual'} on {len(rows)} cases "
            f"({unsupported} unsupported)")
    return Result(payload, text, EXIT_OK if ok else EXIT_MISMATCH)


def _single(u):
    if len(u.terms) != 1 or next(iter(u.terms.values())) != 1:
        raise CliError("identity checks take single basis classes", EXIT_INPUT)
    return next(iter(u.terms))


def _sweep(args, ring):
    small = InsertionRing(args.n, min(args.window, 1)).basis()
    out = []
    for beta in range(min(args.qmax, 1) + 1):
        if args.action == "wdvv":
            for q in combinations_with_replacement(small, 4):
                if sum(x[0] for x in q) == beta:
                    out.append((beta, tuple((0, x) for x in q)))
        else:
            for x1 in small:
                for rest in combinations_with_replacement(small, 2):
                    if x1[0] + sum(x[0] for x in rest) == beta:
                        out.append((beta, ((1, x1),) + tuple((0, x) for x in rest)))
    return out


# -- virasoro ---------------------------------------------------------------------------

def _l_name(m: int, c) -> str:
    if c == 0:
        return "0"
    return f"l_{m}" if c == 1 else f"{frac_str(c)}*l_{m}"


def cmd_virasoro(args) -> Result:
    ring = InsertionRing(args.n, args.window)
    if args.action == "bracket":
        m, k = args.m, args.k
        if min(m, k) < -1:
            raise CliError("l_m is defined for m >= -1", EXIT_INPUT)
        exact = gv.check_bracket(m, k, ring)
        count = gv.check_bracket_windowed(m, k, ring, args.zmin, args.zmax)
        rhs = _l_name(m + k, k - m) if m + k >= -1 else "0"
        payload = {"m": m, "k": k, "rhs": rhs, "exact": exact, "vectors_checked": count}
        text = f"{rhs} : {'exact on interior window' if exact else 'FAILS'}"
        return Result(payload, text, EXIT_OK if exact else EXIT_MISMATCH)
    if args.action == "symplectic":
        rows = []
        for m in args.ms:
            res = gv.symplectic_residual(gv.l_op(m, ring), ring, args.zmin, args.zmax)
            rows.append({"m": m, "residual": frac_str(res)})
        ok = all(r["residual"] == "0" for r in rows)
        text = "\n".join(f"l_{r['m']}: residual {r['residual']}" for r in rows)
        return Result({"residuals": rows}, text, EXIT_OK if ok else EXIT_MISMATCH)
    if args.action == "genus0":
        m = {"L-1": -1, "L0": 0}[args.op]
        W = min(args.window, args.gwindow)
        F = gv.assemble_potential(SmallProvider(args.n), W, args.levels, args.max_vars, args.max_beta)
        L = gv.build_L(m, InsertionRing(args.n, W), args.levels)
        rep = gv.genus0_residual(L, F)
        nonzero = [{"beta": b, "monomial": [gv.var_name(v) for v in mono], "value": frac_str(c)}
                   for (b, mono), c in sorted(rep.values.items())]
        payload = {"op": args.op, "determined": rep.determined, "untestable": rep.undetermined,
                   "nonzero": nonzero}
        if args.dump:
            payload["operator"] = L.to_json()
        text = (("all determined coefficients vanish" if rep.vanishes else
                 f"{len(nonzero)} determined coefficients are NONZERO")
                + f" (determined: {rep.determined}, untestable: {rep.undetermined})")
        return Result(payload, text, EXIT_OK if rep.vanishes else EXIT_MISMATCH)
    lo, hi = _cutoffs(args.cutoffs)
    vals = [(N, gv.anomaly(N, args.n)) for N in range(lo, hi + 1)]
    rows = [{"N": N, "anomaly": frac_str(a),
             "difference": frac_str(a - vals[j - 1][1]) if j else None}
            for j, (N, a) in enumerate(vals)]
    text = "\n".join(f"N={r['N']}  anomaly={r['anomaly']}"
                     + (f"  diff={r['difference']}" if r["difference"] is not None else "") for r in rows)
    return Result({"n": args.n, "rows": rows}, text)


def _cutoffs(spec: str):
    try:
        lo, _, hi = spec.partition("..")
        lo, hi = int(lo), int(hi or lo)
    except ValueError:
        raise CliError(f"cutoffs must look like 2..8, got {spec!r}", EXIT_INPUT)
    if lo < 1 or hi < lo:
        raise CliError("cutoffs need 1 <= lo <= hi", EXIT_INPUT)
    return lo, hi


# -- argument parsing ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=None, help="ambient dimension (default 2)")
    common.add_argument("--window", type=int, default=None, help="contact-order window W (default 4)")
    common.add_argument("--qmax", type=int, default=None, help="largest q-degree (default 3)")
    common.add_argument("--zmin", type=int, default=None, help="lowest z-exponent (default -6)")
    common.add_argument("--zmax", type=int, default=None, help="highest z-exponent (default 6)")
    common.add_argument("--format", choices=("json", "text"), default=None)
    common.add_argument("--config", help="key = value file under a [relgw] header; flags win")

    p = argparse.ArgumentParser(prog="relgw", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    ring = sub.add_parser("ring", parents=[common], help="ring of insertions")
    ring.add_argument("action", choices=("mult", "pair", "table", "degree"))
    ring.add_argument("exprs", nargs="*")

    graphs = sub.add_parser("graphs", parents=[common], help="admissible bipartite graphs")
    graphs.add_argument("action", choices=("enumerate", "vdim", "class"))
    graphs.add_argument("--degree", type=int, default=1)
    graphs.add_argument("--legs", type=int, default=0)
    graphs.add_argument("--mu", default="1", help="comma-separated contact orders")
    graphs.add_argument("--graph", help="graph JSON file (for 'class')")

    quantum = sub.add_parser("quantum", parents=[common], help="small relative quantum ring")
    quantum.add_argument("action", choices=("product", "table", "verify", "wdvv", "trr", "threepoint"))
    quantum.add_argument("items", nargs="*", help="insertions, optionally prefixed psi^a:")
    quantum.add_argument("--beta", type=int, default=0)
    quantum.add_argument("--source", choices=("oracle", "solver"), default="oracle")

    vir = sub.add_parser("virasoro", parents=[common], help="Givental operators and Virasoro checks")
    vsub = vir.add_subparsers(dest="action", required=True)
    br = vsub.add_parser("bracket", parents=[common])
    br.add_argument("m", type=int)
    br.add_argument("k", type=int)
    sy = vsub.add_parser("symplectic", parents=[common])
    sy.add_argument("--ms", type=lambda s: [int(x) for x in s.split(",")], default=[-1, 0, 1])
    g0 = vsub.add_parser("genus0", parents=[common])
    g0.add_argument("--op", choices=("L-1", "L0"), default="L-1")
    g0.add_argument("--levels", type=int, default=1)
    g0.add_argument("--max-vars", type=int, default=4)
    g0.add_argument("--max-beta", type=int, default=2)
    g0.add_argument("--gwindow", type=int, default=2, help="contact window for the potential")
    g0.add_argument("--dump", action="store_true", help="include the operator term list")
    an = vsub.add_parser("anomaly", parents=[common])
    an.add_argument("--cutoffs", default="2..8")
    return p


def resolve_config(args):
    values = dict(DEFAULTS)
    if args.config:
        cp = configparser.ConfigParser()
        try:
            with open(args.config) as fh:
                cp.read_file(fh)
        except (OSError, configparser.Error) as exc:
            raise CliError(f"cannot read config: {exc}", EXIT_INPUT)
        if cp.has_section("relgw"):
            for key, val in cp.items("relgw"):
                if key not in values:
                    raise CliError(f"unknown config key {key!r}", EXIT_INPUT)
                values[key] = val if key == "format" else int(val)
    for key in values:
        if getattr(args, key, None) is not None:
            values[key] = getattr(args, key)
    for key, val in values.items():
        setattr(args, key, val)
    if args.n < 1 or args.window < 1 or not args.zmin < 0 < args.zmax or args.qmax < 1:
        raise CliError("need n >= 1, window >= 1, qmax >= 1 and zmin < 0 < zmax", EXIT_INPUT)


COMMANDS = {"ring": cmd_ring, "graphs": cmd_graphs, "quantum": cmd_quantum, "virasoro": cmd_virasoro}


def run(argv=None) -> tuple[int, str]:
    """Execute and return ``(exit code, stdout text)``; errors go to stderr."""
    parser = build_parser()
    args, extra = parser.parse_known_args(argv)
    # positionals given after options arrive here; anything else is an error
    target = "exprs" if args.command == "ring" else "items"
    if any(e.startswith("--") for e in extra) or (extra and not hasattr(args, target)):
        parser.error(f"unrecognized arguments: {' '.join(extra)}")
    if extra:
        setattr(args, target, list(getattr(args, target)) + extra)
    try:
        resolve_config(args)
        res = COMMANDS[args.command](args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code, ""
    except (WindowError, gv.ZWindowError) as exc:
        print(f"window overflow: {exc}", file=sys.stderr)
        return EXIT_WINDOW, ""
    except gv.InsufficientMargin as exc:
        print(f"insufficient margin: {exc}", file=sys.stderr)
        return EXIT_MARGIN, ""
    if args.format == "json":
        return res.code, json.dumps(res.payload, sort_keys=True, indent=2)
    return res.code, res.text


def main(argv=None) -> int:
    code, out = run(argv)
    if out:
        print(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
