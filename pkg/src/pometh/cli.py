"""Command-line front end.

Exit status: 0 when the query is answered positively, 1 when answered
negatively (including "no witness up to the bound"), 2 on input errors or
queries that cannot be checked.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .belief import SEMANTICS, ObsRecord, belief, cell_partition_measures
from .checker import Evaluator, Point, Verdict, almost_sure_eventually, check, decide_support_query, witness_search
from .errors import PomethError
from .formula import Cmp, MixedTimeAtom
from .model import format_model, parse_model, parse_pfa, validate_path
from .parser import parse_formula, show
from .reductions import LRS, dioph_to_atom, parse_dioph, parse_rationals, pfa_to_podtmc, skolem_instance


class InputError(Exception):
    pass


def _nonneg(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text!r}") from None
    if n < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text!r}")
    return n


def _positive(text: str) -> int:
    n = _nonneg(text)
    if n == 0:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("plain", "json-lines"), default="plain")
    common.add_argument("--jobs", type=_positive, default=1, help="worker processes for witness search")

    p = argparse.ArgumentParser(prog="pometh", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", parents=[common], help="check a formula or search for an exists-atom witness")
    c.add_argument("--model", required=True)
    c.add_argument("--semantics", choices=SEMANTICS, required=True)
    c.add_argument("--formula", required=True)
    c.add_argument("--horizon", type=_nonneg, help="bound used for unbounded operators")
    c.add_argument("--bound", type=_nonneg, help="witness bound for exists-atoms (defaults to --horizon)")

    e = sub.add_parser("eval-term", parents=[common], help="exact value of a probability expression at a point")
    e.add_argument("--model", required=True)
    e.add_argument("--semantics", choices=SEMANTICS, required=True)
    e.add_argument("--term", required=True)
    e.add_argument("--path", required=True, help="comma-separated state ids")
    e.add_argument("--time", type=_nonneg, help="current time (defaults to the end of the path)")

    b = sub.add_parser("beliefs", parents=[common], help="belief distributions of an agent")
    b.add_argument("--model", required=True)
    b.add_argument("--agent", required=True)
    b.add_argument("--semantics", choices=SEMANTICS, required=True)
    b.add_argument("--time", type=_nonneg, required=True)
    b.add_argument("--obs", help="observation sequence (spr) or symbol (clk), comma-separated")

    r = sub.add_parser("reduce-pfa", parents=[common], help="emit the PO-DTMC and formula for a PFA")
    r.add_argument("--pfa", required=True)
    r.add_argument("--out")
    r.add_argument("--horizon", type=_nonneg)

    d = sub.add_parser("reduce-dioph", parents=[common], help="search the mixed-time encoding of a Diophantine equation")
    d.add_argument("--poly", required=True)
    d.add_argument("--bound", type=_nonneg, required=True)
    d.add_argument("--emit-model")

    s = sub.add_parser("skolem", parents=[common], help="bounded Skolem search through the stochastic encoding")
    s.add_argument("--coeffs", required=True, help="a_1..a_k, comma-separated")
    s.add_argument("--init", required=True, help="u_0..u_{k-1}, comma-separated")
    s.add_argument("--bound", type=_nonneg, required=True)
    s.add_argument("--emit-model")

    q = sub.add_parser("qualitative", parents=[common], help="exact probability-0/1 and support queries")
    q.add_argument("--model", required=True)
    g = q.add_mutually_exclusive_group(required=True)
    g.add_argument("--almost-sure-eventually", metavar="TARGET")
    g.add_argument("--support", nargs=3, metavar=("KIND", "PRED", "PROP"))
    return p


def _load_model(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None
    return parse_model(text)


def _emit(args, record: dict, plain: str, out) -> None:
    if args.format == "json-lines":
        out.write(json.dumps(record, sort_keys=True, ensure_ascii=False) + "\n")
    else:
        out.write(plain + "\n")


def _verdict(args, v: Verdict, out) -> int:
    _emit(args, v.as_dict(), str(v), out)
    return 0 if v.positive else 1


def _fmt(xs) -> str:
    return " ".join(str(x) for x in xs)


def _write_model(path: str, text: str) -> None:
    Path(path).write_text(text)


def _cmd_check(args, out) -> int:
    m = _load_model(args.model)
    phi = parse_formula(args.formula)
    if isinstance(phi, MixedTimeAtom):
        bound = args.bound if args.bound is not None else args.horizon
        if bound is None:
            raise InputError("exists-atoms need --bound (or --horizon)")
        return _verdict(args, witness_search(m, phi, bound, jobs=args.jobs), out)
    return _verdict(args, check(m, args.semantics, phi, horizon=args.horizon), out)


def _cmd_eval_term(args, out) -> int:
    m = _load_model(args.model)
    parsed = parse_formula(f"{args.term} >= 0")
    if not isinstance(parsed, Cmp):
        raise InputError("--term must be a polynomial in Pr/Prior terms")
    path = validate_path(m, [s for s in args.path.split(",") if s])
    pt = Point(tuple(m.states[i] for i in path), args.time)
    ev = Evaluator(m, args.semantics)
    values = {}
    for term in parsed.poly.terms():
        num, den = ev.term_masses(term, path, pt.time)
        values[term] = num / den
    value = parsed.poly.evaluate(values)
    _emit(args, {"value": str(value)}, str(value), out)
    return 0


def _cmd_beliefs(args, out) -> int:
    m = _load_model(args.model)
    if args.agent not in m.obs:
        raise InputError(f"unknown agent {args.agent!r}")
    if args.obs is not None:
        syms = [x for x in args.obs.split(",") if x]
        if args.semantics == "spr":
            rec = ObsRecord.spr(args.agent, syms)
            if rec.time != args.time:
                raise InputError(f"spr needs {args.time + 1} observations for time {args.time}")
        else:
            if len(syms) != 1:
                raise InputError("clk needs a single observation symbol")
            rec = ObsRecord.clk(args.agent, args.time, syms[0])
        bel = belief(m, rec)
        _emit(args, {"obs": syms, "mass": str(bel.cell_measure), "belief": [str(x) for x in bel.dist]}, _fmt(bel.dist), out)
        return 0
    for key in cell_partition_measures(m, args.agent, args.semantics, args.time):
        if args.semantics == "spr":
            rec, label = ObsRecord.spr(args.agent, key), ",".join(key)
        else:
            rec, label = ObsRecord.clk(args.agent, args.time, key), key
        bel = belief(m, rec)
        _emit(
            args,
            {"obs": label.split(","), "mass": str(bel.cell_measure), "belief": [str(x) for x in bel.dist]},
            f"obs={label} mass={bel.cell_measure} : {_fmt(bel.dist)}",
            out,
        )
    return 0


def _cmd_reduce_pfa(args, out) -> int:
    try:
        text = Path(args.pfa).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {args.pfa}: {exc.strerror or exc}") from None
    m, phi = pfa_to_podtmc(parse_pfa(text), args.horizon)
    model_text = format_model(m)
    if args.out:
        _write_model(args.out, model_text)
    elif args.format == "plain":
        out.write(model_text)
    _emit(args, {"formula": show(phi), "model": args.out or model_text}, f"# formula: {show(phi)}", out)
    return 0


def _cmd_reduce_dioph(args, out) -> int:
    chain, atom = dioph_to_atom(parse_dioph(args.poly))
    if args.emit_model:
        _write_model(args.emit_model, format_model(chain))
    return _verdict(args, witness_search(chain, atom, args.bound, jobs=args.jobs), out)


def _cmd_skolem(args, out) -> int:
    seq = LRS(parse_rationals(args.coeffs), parse_rationals(args.init))
    m, atom = skolem_instance(seq)
    if args.emit_model:
        _write_model(args.emit_model, format_model(m) + f"# formula: {show(atom)}\n")
    return _verdict(args, witness_search(m, atom, args.bound, jobs=args.jobs), out)


def _cmd_qualitative(args, out) -> int:
    m = _load_model(args.model)
    if args.almost_sure_eventually is not None:
        answer = almost_sure_eventually(m, parse_formula(args.almost_sure_eventually))
        query = f"Pr(F {args.almost_sure_eventually}) = 1"
    else:
        kind, pred, prop = args.support
        answer = decide_support_query(m, kind, pred, parse_formula(prop))
        query = f"{kind} t . Pr({prop}@t) {'= 0' if pred == 'zero' else '> 0'}"
    _emit(args, {"query": query, "answer": answer}, "TRUE" if answer else "FALSE", out)
    return 0 if answer else 1


COMMANDS = {
    "check": _cmd_check,
    "eval-term": _cmd_eval_term,
    "beliefs": _cmd_beliefs,
    "reduce-pfa": _cmd_reduce_pfa,
    "reduce-dioph": _cmd_reduce_dioph,
    "skolem": _cmd_skolem,
    "qualitative": _cmd_qualitative,
}


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        return COMMANDS[args.command](args, out)
    except (InputError, PomethError, ValueError, KeyError, ZeroDivisionError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        err.write(f"error: {msg}\n")
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
