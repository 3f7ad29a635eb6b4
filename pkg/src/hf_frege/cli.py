"""Command line front end (``hf-frege``)."""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__, abstraction, diagonal, eliminate, hfset, model, suite
from .errors import ElementNotInUniverse, HfFregeError, UserError
from .syntax import ast
from .syntax.coding import code_formula, decode_formula
from .syntax.core import ENUMERATION_ORDER_VERSION, core_text, normalize
from .syntax.enumeration import enumerate_formula, index_of
from .syntax.parser import parse

VERSION = f"hf-frege {__version__} (enumeration order {ENUMERATION_ORDER_VERSION})"
BUDGET_ENV = "HF_FREGE_BUDGET"


def _binding(text: str):
    name, sep, value = text.partition("=")
    name = name.strip().lstrip("$")
    if not sep or not name:
        raise argparse.ArgumentTypeError(f"expected name=<hf-literal>, got {text!r}")
    return name, value.strip()


def _env(args) -> dict:
    return {name: hfset.parse_hf(value) for name, value in (args.bind or [])}


def _budget(args):
    if args.budget is not None:
        return args.budget
    raw = os.environ.get(BUDGET_ENV)
    if raw is None:
        return None
    try:
        return int(raw)
    except ValueError:
        raise UserError(f"{BUDGET_ENV} must be an integer, got {raw!r}") from None


def _need(args, attr, flag):
    value = getattr(args, attr)
    if value is None:
        raise UserError(f"{flag} is required")
    return value


def _members(ext) -> list[str]:
    return [hfset.format_hf(x) for x in ext.members()]


# --- commands -----------------------------------------------------------------

def cmd_eval(args):
    u = model.parse_universe(args.universe)
    f = parse(_need(args, "formula", "--formula"))
    env = _env(args)
    if ast.is_pure(f):
        value = model.evaluate(u, f, env)
    else:
        value = eliminate.eval_extended(u, f, env, _budget(args))
    return {"universe": u.label, "formula": args.formula, "value": value}


def _class_command(args, op):
    u = model.parse_universe(args.universe)
    f = parse(_need(args, "formula", "--formula"))
    env = _env(args)
    obj = op(u, f, env, object_var=args.object_var, budget=_budget(args))
    out = obj.to_json()
    out["extension"] = _members(abstraction.presentation_extension(u, f, env, args.object_var))
    return out


def cmd_extension(args):
    return _class_command(args, abstraction.extension_of)


def cmd_number(args):
    return _class_command(args, abstraction.class_number)


def cmd_scott(args):
    x = hfset.parse_hf(_need(args, "set", "--set"))
    card = abstraction.scott_cardinal(x)
    return {"set": hfset.format_hf(x), "cardinality": hfset.cardinality(x),
            "cardinal": hfset.format_hf(card), "cardinal_size": hfset.cardinality(card)}


def cmd_abstract(args):
    u = model.parse_universe(args.universe)
    relation = _need(args, "formula", "--formula")
    table = abstraction.scott_abstractions(u, relation, _env(args), args.left, args.right)
    if args.element is not None:
        x = hfset.parse_hf(args.element)
        if x not in table:
            raise ElementNotInUniverse(f"{hfset.format_hf(x)} is not an element of {u.label}")
        items = [x]
    else:
        items = list(u.elements)
    return {
        "universe": u.label,
        "relation": relation,
        "classes": len(set(table.values())),
        "abstractions": {hfset.format_hf(x): hfset.format_hf(table[x]) for x in items},
    }


def cmd_eliminate(args):
    u = model.parse_universe(args.universe)
    f = parse(_need(args, "formula", "--formula"))
    env = _env(args)
    if args.mode == "literal":
        res = eliminate.translate_literal(u, f, env, _budget(args), args.node_budget)
    else:
        res = eliminate.translate_uniform(u, f, _budget(args), node_budget=args.node_budget, env=env)
    out = {"mode": args.mode, "formula": res.text, "audit": res.audit()}
    if args.check:
        lhs, rhs = eliminate.check_translation(res, u, f, env, _budget(args))
        out["check"] = {"translated": lhs, "original": rhs, "agree": lhs == rhs}
    return out


def cmd_diagonal(args):
    base = model.parse_universe(args.universe) if args.universe_given else None
    w = diagonal.russell_witness(_need(args, "T", "--T"), base)
    return w.to_json()


def cmd_escape(args):
    u = model.parse_universe(args.universe)
    return diagonal.russell_escape(u, _budget(args)).to_json()


def cmd_enumerate(args):
    if args.start < 0 or args.count < 0:
        raise UserError("--from and --count must be nonnegative")
    return {
        "order": ENUMERATION_ORDER_VERSION,
        "formulas": [
            {"index": i, "formula": core_text(f), "tokens": f.token_text()}
            for i in range(args.start, args.start + args.count)
            for f in [enumerate_formula(i)]
        ],
    }


def cmd_blv_check(args):
    u = model.parse_universe(args.universe)
    from .corpus import blv_presentations

    report = abstraction.blv_check(u, blv_presentations(u, args.count), _budget(args))
    report["violations"] = [list(v) for v in report["violations"]]
    return report


def cmd_code(args):
    param = None if args.param_var == "" else args.param_var
    core = normalize(parse(_need(args, "formula", "--formula"), extended=False), args.object_var, param)
    code = code_formula(core)
    return {"formula": core_text(core), "tokens": core.token_text(), "index": index_of(core),
            "code": hfset.format_hf(code)}


def cmd_decode(args):
    core = decode_formula(hfset.parse_hf(_need(args, "hf", "--hf")))
    return {"formula": core_text(core), "tokens": core.token_text(), "index": index_of(core)}


def cmd_suite(args):
    only = None
    if args.only:
        try:
            only = {int(s) for s in args.only.split(",")}
        except ValueError:
            raise UserError(f"--only takes comma separated criterion numbers, got {args.only!r}") from None
    results = suite.run_suite(args.seed, only)
    return {"seed": args.seed, "results": [r.to_json() for r in results],
            "passed": all(r.ok for r in results)}, results


# --- output -------------------------------------------------------------------

def _text(value, indent=0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(value, dict):
        for k, v in value.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(value, list):
        for v in value:
            if isinstance(v, dict) and v:
                sub = _text(v, indent + 1)
                sub[0] = f"{pad}- {sub[0].lstrip()}"
                lines.extend(sub)
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    else:
        lines.append(pad + _scalar(value))
    return lines


def _scalar(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "null"
    if isinstance(v, (list, dict)):
        return json.dumps(v)
    return str(v)


def emit(payload, as_json: bool, stream=None):
    stream = stream or sys.stdout
    if as_json:
        stream.write(json.dumps(payload, indent=2) + "\n")
    else:
        stream.write("\n".join(_text(payload)) + "\n")


# --- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--universe", default=None,
                        help="v2|v3|v4|v5!|ack:N|closure:#a,#b (default v3)")
    common.add_argument("--formula", help="formula in surface syntax")
    common.add_argument("--bind", action="append", type=_binding, metavar="NAME=HF",
                        help="bind a free name or $param to an HF literal (repeatable)")
    common.add_argument("--budget", type=int, default=None,
                        help=f"enumeration indices to scan (default: ${BUDGET_ENV} or {model.DEFAULT_BUDGET})")
    common.add_argument("--json", action="store_true", help="emit JSON instead of text")
    common.add_argument("--seed", type=int, default=0, help="seed for generated corpora")

    parser = argparse.ArgumentParser(prog="hf-frege", description="Fregean abstraction over finite HF universes.")
    parser.add_argument("--version", action="version", version=VERSION)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(fn=fn)
        return p

    add("eval", cmd_eval, "truth value of a (possibly extended) formula")
    for name, fn, text in (("extension", cmd_extension, "extension object of a class"),
                           ("number", cmd_number, "Cantor-Hume number object of a class")):
        p = add(name, fn, text)
        p.add_argument("--object-var", default="x")
    p = add("scott", cmd_scott, "Scott cardinal of an HF set")
    p.add_argument("--set", help="HF literal, e.g. {#0,#1}")
    p = add("abstract", cmd_abstract, "Scott abstraction for an equivalence formula in a, b")
    p.add_argument("--element", help="only this element")
    p.add_argument("--left", default="a")
    p.add_argument("--right", default="b")
    p = add("eliminate", cmd_eliminate, "translate away eps terms")
    p.add_argument("--mode", choices=("literal", "uniform"), default="literal")
    p.add_argument("--node-budget", type=int, default=eliminate.DEFAULT_NODE_BUDGET)
    p.add_argument("--check", action="store_true", help="also evaluate both sides")
    p = add("diagonal", cmd_diagonal, "diagonal witness against a candidate truth predicate")
    p.add_argument("--T", dest="T", help="candidate T(y, x)")
    add("escape", cmd_escape, "the Russell class's extension object lies outside the universe")
    p = add("enumerate", cmd_enumerate, "core formulas in enumeration order")
    p.add_argument("--from", dest="start", type=int, default=0)
    p.add_argument("--count", type=int, default=10)
    p = add("blv-check", cmd_blv_check, "Basic Law V over the first formulas x all parameters")
    p.add_argument("--count", type=int, default=30)
    p = add("code", cmd_code, "structural code of a formula")
    p.add_argument("--object-var", default="x")
    p.add_argument("--param-var", default="p", help="name taken as the parameter slot ('' for none)")
    p = add("decode", cmd_decode, "formula of a structural code")
    p.add_argument("--hf", help="HF literal")
    p = add("suite", cmd_suite, "run the acceptance battery")
    p.add_argument("--only", help="comma separated criterion numbers")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.universe_given = args.universe is not None
    if args.universe is None:
        args.universe = "v3"
    try:
        result = args.fn(args)
    except HfFregeError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.code
    except RecursionError:
        print("error: formula nesting too deep", file=sys.stderr)
        return 3
    if args.command == "suite":
        payload, results = result
        if args.json:
            emit(payload, True)
        else:
            for r in results:
                print(r.line())
        return 0 if payload["passed"] else 1
    emit(result, args.json)
    return 0


if __name__ == "__main__":
    sys.exit(main())
