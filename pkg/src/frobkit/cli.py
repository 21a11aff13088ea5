"""Command-line front end.

    frobkit COMMAND SESSION [flags] [--json]

Ideal, polynomial and integer flags take the name of a session binding or
an inline value (``--ideal "x, y^2"``, ``--c "a+b"``, ``--J R``). Ideals
are printed as reduced Groebner bases, one generator per line.

Exit codes: 0 ok, 1 usage, 2 parse error, 3 precondition failed,
4 iteration cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import frobenius as fr
from . import groebner as gb
from . import tight
from .errors import ContextMismatch, ExponentOverflow, IterationCapExceeded, ParseError, PreconditionError
from .ring import Polynomial
from .session import load_session

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_PRECONDITION, EXIT_CAP = range(5)
STATUS = {
    EXIT_OK: "ok",
    EXIT_USAGE: "usage",
    EXIT_PARSE: "parse-error",
    EXIT_PRECONDITION: "precondition-failed",
    EXIT_CAP: "cap-exceeded",
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# -- argument resolution -------------------------------------------------------


def _multiplier(s, args):
    if getattr(args, "mult", None):
        if args.mult not in s.multipliers:
            raise UsageError(f"no multiplier binding named {args.mult!r}")
        return s.multipliers[args.mult]
    if not args.u or not args.I:
        raise UsageError("give --mult NAME or both --u and --I")
    return fr.FrobeniusMultiplier(s.poly(args.u), s.ideal(args.I), 1)


def _presentation(s, args, mult=None):
    if getattr(args, "I", None):
        return gb.QuotientPresentation(s.ideal(args.I))
    if mult is not None:
        return gb.QuotientPresentation(mult.base)
    raise UsageError("--I is required")


def _ideal(s, ref, flag):
    if ref is None:
        raise UsageError(f"{flag} is required")
    return s.ideal(ref)


# -- command handlers: each returns a list of (key, value) pairs ----------------


def cmd_gb(s, a):
    return [("ideal", gb.groebner_basis(_ideal(s, a.ideal, "--ideal")))]


def cmd_nf(s, a):
    return [("nf", gb.normal_form(s.poly(a.poly), _ideal(s, a.ideal, "--ideal")))]


def cmd_eq(s, a):
    return [("equal", gb.ideal_equal(_ideal(s, a.a, "--a"), _ideal(s, a.b, "--b")))]


def _binary(op):
    def handler(s, a):
        return [("ideal", op(_ideal(s, a.a, "--a"), _ideal(s, a.b, "--b")))]

    return handler


def cmd_dim(s, a):
    return [("dim", gb.quotient_dimension(_ideal(s, a.ideal, "--ideal")))]


def cmd_bracket(s, a):
    return [("ideal", gb.groebner_basis(fr.bracket_power(_ideal(s, a.ideal, "--ideal"), s.integer(a.e))))]


def cmd_root(s, a):
    return [("ideal", fr.frobenius_root(_ideal(s, a.ideal, "--ideal"), s.integer(a.e)))]


def cmd_star(s, a):
    return [("ideal", fr.star_closure(_ideal(s, a.ideal, "--ideal"), s.poly(a.v), s.integer(a.e), a.cap))]


def cmd_sharp(s, a):
    mult = _multiplier(s, a)
    return [("ideal", fr.sharp_closure(_ideal(s, a.ideal, "--ideal"), mult, a.cap))]


def cmd_esideal(s, a):
    check = fr.is_es_ideal(_ideal(s, a.ideal, "--ideal"), _multiplier(s, a))
    return [("esideal", check.ok), ("reason", check.reason)]


def cmd_hsl(s, a):
    res = fr.hsl_chain(_multiplier(s, a), a.cap)
    return [("eta", res.eta), ("finjective", res.f_injective), ("nil", res.nil_ideal)]


def cmd_gradedann(s, a):
    mult = _multiplier(s, a)
    desc = tight.ESModuleDescriptor(_presentation(s, a, mult), _ideal(s, a.L, "--L"))
    level = s.integer(a.level)
    if not a.chain:
        return [("ideal", tight.graded_ann_component(desc, mult, level))]
    chain = tight.graded_ann_chain(desc, mult, level)
    out = [("stabilized_at", chain.stabilized_at)]
    out.extend((f"level{i}", M) for i, M in enumerate(chain))
    return out


def _wpti_args(s, a):
    mult = _multiplier(s, a)
    return _presentation(s, a, mult), mult, _ideal(s, a.J, "--J"), s.poly(a.c)


def cmd_wpti(s, a):
    pres, mult, J, c = _wpti_args(s, a)
    return [("ideal", tight.wpti(pres, mult, J, c, s.integer(a.e)))]


def cmd_wptilimit(s, a):
    pres, mult, J, c = _wpti_args(s, a)
    res = tight.wpti_limit(pres, mult, J, c, s.integer(a.max_level))
    out = [("stable_index", res.stable_index)]
    out.extend((f"tau{i}", T) for i, T in enumerate(res.per_level))
    if res.stable_value is not None:
        out.append(("stable", res.stable_value))
    return out


def cmd_nphi(s, a):
    pres = _presentation(s, a)
    J = _ideal(s, a.J, "--J")
    return [("ideal", tight.n_phi_ideal(pres, s.poly(a.v), s.integer(a.e), J, s.poly(a.c)))]


def cmd_tc(s, a):
    pres, mult, J, c = _wpti_args(s, a)
    res = tight.tc_annihilator(pres, mult, J, c, s.integer(a.eta))
    return [("ideal", res.ideal), ("variants_agree", res.variants_agree)]


def cmd_cizero(s, a):
    pres = _presentation(s, a)
    if not a.seq:
        raise UsageError("--seq is required")
    seq = [s.poly(ref.strip()) for ref in a.seq.split(",")]
    return [("ideal", tight.ci_zero_star(pres, seq, s.poly(a.c), s.integer(a.max_level)))]


def cmd_qgtest(s, a):
    mult = _multiplier(s, a)
    return [("ideal", tight.quasi_gorenstein_test_ideal(_presentation(s, a, mult), mult, s.poly(a.c)))]


def cmd_verifychain(s, a):
    mult = _multiplier(s, a)
    if not a.chain:
        raise UsageError("--chain is required")
    members = [s.ideal(ref.strip()) for ref in a.chain.split(";")]
    report = fr.verify_sharp_chain(members, mult, a.cap)
    return [("valid", report.valid)] + [("violation", v) for v in report.violations]


COMMANDS = {
    "gb": (cmd_gb, ["ideal"]),
    "nf": (cmd_nf, ["poly", "ideal"]),
    "eq": (cmd_eq, ["a", "b"]),
    "sum": (_binary(gb.ideal_sum), ["a", "b"]),
    "product": (_binary(gb.ideal_product), ["a", "b"]),
    "intersect": (_binary(gb.ideal_intersect), ["a", "b"]),
    "colon": (_binary(gb.ideal_colon), ["a", "b"]),
    "dim": (cmd_dim, ["ideal"]),
    "bracket": (cmd_bracket, ["ideal", "e"]),
    "root": (cmd_root, ["ideal", "e"]),
    "star": (cmd_star, ["ideal", "v", "e"]),
    "sharp": (cmd_sharp, ["ideal", "mult"]),
    "esideal": (cmd_esideal, ["ideal", "mult"]),
    "hsl": (cmd_hsl, ["mult"]),
    "gradedann": (cmd_gradedann, ["L", "mult", "level", "chain_flag"]),
    "wpti": (cmd_wpti, ["mult", "J", "c", "e"]),
    "wptilimit": (cmd_wptilimit, ["mult", "J", "c", "max_level"]),
    "nphi": (cmd_nphi, ["I", "v", "e", "J", "c"]),
    "tc": (cmd_tc, ["mult", "J", "c", "eta"]),
    "cizero": (cmd_cizero, ["I", "seq", "c", "max_level"]),
    "qgtest": (cmd_qgtest, ["mult", "c"]),
    "verifychain": (cmd_verifychain, ["mult", "chain"]),
}

COMMAND_HELP = {
    "gb": "reduced Groebner basis",
    "nf": "normal form of a polynomial modulo an ideal",
    "eq": "ideal equality",
    "sum": "ideal sum",
    "product": "ideal product",
    "intersect": "ideal intersection",
    "colon": "ideal quotient (a : b)",
    "dim": "Krull dimension of R/ideal",
    "bracket": "Frobenius bracket power",
    "root": "Frobenius root I_e",
    "star": "star closure with multiplier v at level e",
    "sharp": "sharp closure of an E_S-ideal",
    "esideal": "E_S-ideal test",
    "hsl": "index of nilpotency and F-injectivity",
    "gradedann": "graded annihilator component or chain",
    "wpti": "p^e-weak parameter test ideal",
    "wptilimit": "weak parameter test ideals until stabilization",
    "nphi": "the ideal L_phi for one Frobenius map",
    "tc": "ideal annihilating a tight closure in E_S",
    "cizero": "0* annihilator for complete intersections",
    "qgtest": "test ideal of a quasi-Gorenstein ring",
    "verifychain": "check a chain of sharp-closed ideals",
}

_FLAG_HELP = {
    "ideal": "ideal binding or inline generator list",
    "poly": "polynomial binding or expression",
    "a": "first ideal",
    "b": "second ideal",
    "e": "Frobenius level (int binding or literal)",
    "v": "multiplier polynomial",
    "L": "ideal annihilating the submodule",
    "J": "ideal J (R for the unit ideal)",
    "c": "test element",
    "level": "level, or maximum level with --chain",
    "max_level": "maximum level",
    "eta": "Frobenius level of the test element",
    "seq": "comma-separated regular sequence generating I",
    "I": "defining ideal of S = R/I",
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="frobkit", description="Frobenius ideal calculus over F_p.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True
    for name, (_, flags) in COMMANDS.items():
        sp = sub.add_parser(name, help=COMMAND_HELP[name])
        sp.add_argument("session", help="session file")
        sp.add_argument("--json", action="store_true", help="emit a JSON document")
        sp.add_argument("--cap", type=int, default=None, help="iteration cap (default $FROBKIT_ITER_CAP or 64)")
        for flag in flags:
            if flag == "mult":
                sp.add_argument("--mult", help="multiplier binding")
                sp.add_argument("--u", help="multiplier polynomial u")
                if "I" not in flags:
                    sp.add_argument("--I", help=_FLAG_HELP["I"])
            elif flag == "chain_flag":
                sp.add_argument("--chain", action="store_true", help="print the whole chain")
            elif flag == "chain":
                sp.add_argument("--chain", help="';'-separated ideals")
            elif flag == "max_level":
                sp.add_argument("--max-level", dest="max_level", default="8", help=_FLAG_HELP[flag])
            else:
                sp.add_argument(f"--{flag}", help=_FLAG_HELP.get(flag, flag))
    return parser


# -- output --------------------------------------------------------------------


def _text_value(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "none"
    return str(value)


def _ideal_lines(ideal):
    return [str(g) for g in ideal.groebner]


def render_text(payload) -> str:
    if len(payload) == 1 and isinstance(payload[0][1], gb.Ideal):
        lines = _ideal_lines(payload[0][1])
    else:
        lines = []
        for key, value in payload:
            if isinstance(value, gb.Ideal):
                lines.append(f"{key}:")
                lines.extend("  " + g for g in _ideal_lines(value))
            else:
                lines.append(f"{key}: {_text_value(value)}")
    return "".join(line + "\n" for line in lines)


def render_json(command, status, payload=None, error=None) -> str:
    doc = {"command": command, "status": status}
    if payload is not None:
        out = {}
        for key, value in payload:
            if isinstance(value, gb.Ideal):
                value = _ideal_lines(value)
            elif isinstance(value, Polynomial):
                value = str(value)
            if key in out:
                if not isinstance(out[key], list) or key != "violation":
                    raise ValueError(f"duplicate payload key {key}")
                out[key].append(value)
            else:
                out[key] = [value] if key == "violation" else value
        doc["payload"] = out
    if error is not None:
        doc["error"] = error
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handler = COMMANDS[args.command][0]
    code, payload, message = EXIT_OK, None, None
    try:
        session = load_session(args.session)
        payload = handler(session, args)
    except UsageError as exc:
        code, message = EXIT_USAGE, str(exc)
    except OSError as exc:
        code, message = EXIT_USAGE, f"cannot read session: {exc}"
    except ParseError as exc:
        code, message = EXIT_PARSE, str(exc)
    except (PreconditionError, ContextMismatch, ExponentOverflow) as exc:
        code, message = EXIT_PRECONDITION, str(exc)
    except IterationCapExceeded as exc:
        code, message = EXIT_CAP, str(exc)
    except ValueError as exc:
        code, message = EXIT_USAGE, str(exc)
    if message is not None:
        print(f"frobkit {args.command}: {message}", file=stderr)
    if args.json:
        stdout.write(render_json(args.command, STATUS[code], payload, message))
    elif payload is not None:
        stdout.write(render_text(payload))
    return code


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
