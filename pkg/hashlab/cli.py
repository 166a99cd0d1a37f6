"""
Command-line front end.

    python cli.py hash gcc-cpp z
    python cli.py verify tabulated:L=2,sigma=2 --max-len 2 --exact
    python cli.py table bounds --L 2,4,8,16
    python cli.py witness unary-forced --L 2
    python cli.py bounds epsilon-length --L 2 --epsilon 1/3
    python cli.py bench

Exit status: 0 success, 1 domain error, 2 capacity error, 3 usage error.
Output on stdout is deterministic for fixed arguments and seed (bench
timings excepted); logs go to stderr.
"""
import argparse
from dataclasses import dataclass, fields
from fractions import Fraction
import os
import sys

import pandas as pd

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from config.lab_config import get_lab_config
from hashlab.bench import DEFAULT_ROUNDS, run_bench
from hashlab.bounds import (
    SUMMARY_COLUMNS,
    bounds_table,
    divisor_table,
    epsilon_impossible_length,
    min_family_size,
    stinson_min_size,
    table_bounds,
)
from hashlab.errors import CapacityError, LabError, UsageError
from hashlab.families import SPEC_GRAMMAR, java_signed, parse_family_spec, render_family_spec, sample_instance
from hashlab.gp_table import emit_gp_table, gp_table_frame
from hashlab.graph import run_reproduction
from hashlab.strings import StringSet, format_string, parse_string
from hashlab.verifier import exact_report, monte_carlo_report
from hashlab.witnesses import (
    HTFamily,
    binomial_collision_pair,
    field_for,
    fourwise_break,
    hT_family,
    perfect_unary_witness,
    tau_collision_pair,
    threewise_break,
    unary_forced_collision,
)
from utils.log_utils import configure_logging, get_logger
from utils.report_utils import fraction_text, render_csv, render_json, to_jsonable

logger = get_logger("cli")

FORMATS = ("json", "csv", "text")
DEFAULT_FORMAT = {
    "hash": "text",
    "verify": "json",
    "table": "csv",
    "witness": "json",
    "bounds": "json",
    "bench": "csv",
}
TABLE_TARGETS = ("bounds", "gp", "divisor", "ht", "all")
WITNESS_TARGETS = (
    "tau-pair",
    "binomial-pair",
    "unary-forced",
    "hT-family",
    "perfect-unary",
    "threewise-break",
    "fourwise-break",
)
BOUNDS_TARGETS = ("row", "min-family", "stinson", "epsilon-length")


@dataclass
class CommandOutput:
    kind: str
    document: object
    frame: pd.DataFrame | None = None
    text: str | None = None
    ok: bool = True


class _Parser(argparse.ArgumentParser):
    """argparse that raises UsageError instead of exiting with status 2."""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}\nfamily spec grammar: {SPEC_GRAMMAR}")


def _int_list(text):
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _fraction(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"expected a fraction such as 1/3, got {text!r}") from None


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="seed for sampled instances")
    common.add_argument("--budget", type=int, default=None, help="instances x strings budget")
    common.add_argument("--format", choices=FORMATS, default=None)
    common.add_argument("--out", default=None, help="write output to a file instead of stdout")
    common.add_argument("--save", action="store_true", help="store the result in the results database")
    common.add_argument("--log-level", default=None)

    parser = _Parser(prog="hashlab", description="Iterated string hashing laboratory")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("hash", parents=[common], help="hash strings under one sampled instance")
    p.add_argument("family", help=SPEC_GRAMMAR)
    p.add_argument("strings", nargs="+")
    p.add_argument("--ints", action="store_true", help="strings are comma-separated integers")

    p = sub.add_parser("verify", parents=[common], help="exact or Monte-Carlo property report")
    p.add_argument("family", help=SPEC_GRAMMAR)
    p.add_argument("--L", default=None, help="word size, added to the family spec")
    p.add_argument("--sigma", type=int, default=None, help="alphabet size, added to the family spec")
    p.add_argument("--max-len", type=int, default=2)
    p.add_argument("--min-len", type=int, default=1)
    p.add_argument("--unary", type=int, default=None, metavar="CHAR", help="unary strings of one character")
    p.add_argument("--strings", nargs="+", default=None, help="explicit string list")
    p.add_argument("--pair", nargs=2, default=None, help="Monte-Carlo on one pair of strings")
    p.add_argument("--ints", action="store_true")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact", dest="mode", action="store_const", const="exact")
    mode.add_argument("--mc", dest="mode", action="store_const", const="mc")
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--k-max", type=int, default=2)
    p.add_argument("--workers", type=int, default=None)

    p = sub.add_parser("table", parents=[common], help="published tables and plot data")
    p.add_argument("target", choices=TABLE_TARGETS)
    p.add_argument("--L", default=None, help="word size(s), comma-separated")
    p.add_argument("--n-max", type=int, default=None)
    p.add_argument("--epsilon", type=_fraction, default=Fraction(1, 2))
    p.add_argument("--sigma", type=int, default=None)
    p.add_argument("--exact", action="store_true", help="fail unless every gp row is exact")
    p.add_argument("--no-certain", action="store_true", help="skip the certain-collision search")
    p.add_argument("--wide", action="store_true", help="every bounds column")
    p.add_argument("--wrap", choices=("published", "counter"), default="published")

    p = sub.add_parser("witness", parents=[common], help="build and certify a witness")
    p.add_argument("kind", choices=WITNESS_TARGETS)
    p.add_argument("--L", type=int, default=2)
    p.add_argument("--p", type=int, default=None, help="prime field for tau-pair")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--char", type=int, default=0)
    p.add_argument("--wrap", choices=("published", "counter"), default="published")
    p.add_argument("--family", default=None, help=SPEC_GRAMMAR)

    p = sub.add_parser("bounds", parents=[common], help="length and family-size bounds")
    p.add_argument("target", choices=BOUNDS_TARGETS)
    p.add_argument("--L", type=int, default=2)
    p.add_argument("--K", type=int, default=None)
    p.add_argument("--epsilon", type=_fraction, default=Fraction(1, 2))
    p.add_argument("--a", type=int, default=None, help="number of strings")
    p.add_argument("--b", type=int, default=None, help="number of hash values")
    p.add_argument("--strong", action="store_true")

    p = sub.add_parser("bench", parents=[common], help="compressions per second on the reference corpus")
    p.add_argument("--L", default=None, help="word sizes, comma-separated")
    p.add_argument("--rounds", type=int, default=DEFAULT_ROUNDS)
    return parser


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def _family(args):
    text = args.family
    extra = []
    if getattr(args, "L", None) is not None:
        extra.append(f"L={args.L}")
    if getattr(args, "sigma", None) is not None:
        extra.append(f"sigma={args.sigma}")
    if extra:
        text += ("," if ":" in text else ":") + ",".join(extra)
    return parse_family_spec(text)


def cmd_hash(args):
    spec = _family(args)
    seed = args.seed if args.seed is not None else get_lab_config()["seed"]
    instance = sample_instance(spec, seed)
    rows = []
    for text in args.strings:
        s = parse_string(text, ints=args.ints)
        value = instance.hash(s)
        row = {"string": text, "chars": format_string(s), "value": value}
        if spec.construction == "java-string":
            row["signed"] = java_signed(value)
        rows.append(row)
    document = {"family": render_family_spec(spec), "seed": seed, "instance": instance.to_dict(), "hashes": rows}
    text = "".join(f"{row['value']}\n" for row in rows)
    return CommandOutput("hash", document, pd.DataFrame(rows), text)


def _string_set(args, spec):
    if args.strings:
        return StringSet.of([parse_string(t, ints=args.ints) for t in args.strings], spec.alphabet_size)
    if args.unary is not None:
        return StringSet.unary(args.max_len, args.unary, spec.alphabet_size, args.min_len)
    return StringSet.for_family(spec, args.max_len, args.min_len)


def _report_text(report):
    lines = []
    for f in fields(report):
        value = getattr(report, f.name)
        if isinstance(value, dict):
            for key in sorted(value, key=str):
                lines.append(f"{f.name}.{key}: {fraction_text(value[key])}")
        else:
            lines.append(f"{f.name}: {fraction_text(value)}")
    return "\n".join(lines) + "\n"


def cmd_verify(args):
    spec = _family(args)
    if args.pair is not None:
        if args.mode == "exact":
            raise UsageError("--pair is a Monte-Carlo option; use --mc")
        pair = tuple(parse_string(t, ints=args.ints) for t in args.pair)
        report = monte_carlo_report(spec, pair=pair, trials=args.trials, seed=args.seed, workers=args.workers)
    elif args.mode == "mc":
        report = monte_carlo_report(
            spec, _string_set(args, spec), trials=args.trials, seed=args.seed, workers=args.workers
        )
    else:
        report = exact_report(spec, _string_set(args, spec), k_max=args.k_max, budget=args.budget, workers=args.workers)
    document = to_jsonable(report)
    frame = pd.DataFrame([{"field": key, "value": value} for key, value in _report_text_items(report)])
    return CommandOutput("verification_report", document, frame, _report_text(report))


def _report_text_items(report):
    for line in _report_text(report).splitlines():
        key, _, value = line.partition(": ")
        yield key, value


def cmd_table(args):
    Ls = _int_list(args.L) if args.L else None
    if args.target == "bounds":
        Ls = Ls or [2, 4, 8, 16]
        frame = bounds_table(Ls, args.epsilon)
        if not args.wide:
            frame = frame[SUMMARY_COLUMNS]
        return CommandOutput("bound_rows", frame.to_dict(orient="records"), frame)
    if args.target == "gp":
        L = Ls[0] if Ls else 2
        n_max = args.n_max or 7
        rows = emit_gp_table(L, n_max, budget=args.budget, sigma=args.sigma, certain=not args.no_certain)
        if args.exact and any(row.mode != "exact" for row in rows):
            first = next(row.n for row in rows if row.mode != "exact")
            raise CapacityError(f"gp row n={first} cannot be computed exactly within the pair budget")
        frame = gp_table_frame(rows)
        return CommandOutput("gp_table", [to_jsonable(row) for row in rows], frame)
    if args.target == "divisor":
        frame = divisor_table(args.n_max or 64)
        return CommandOutput("divisor_table", frame.to_dict(orient="records"), frame)
    if args.target == "ht":
        L = Ls[0] if Ls else 2
        family = HTFamily(L, args.wrap)
        limit = args.n_max if args.n_max is not None else family.separation_limit()
        values = family.value_rows(limit)
        frame = pd.DataFrame(values, columns=[f"T{T}" for T in range(1, family.size + 1)])
        frame.insert(0, "r", range(limit + 1))
        return CommandOutput("ht_table", frame.to_dict(orient="records"), frame)
    options = {"bounds_L": Ls} if Ls else {}
    if args.n_max:
        options["gp_n_max"] = args.n_max
    if args.no_certain:
        options["certain_search"] = False
    state = run_reproduction(options)
    frame = pd.DataFrame(state["checks"], columns=["check", "expected", "measured", "passed"])
    ok = not state["error"] and bool(frame["passed"].all())
    if state["error"]:
        logger.error(state["error"])
    document = {"status": state["status"], "error": state["error"], "checks": state["checks"]}
    return CommandOutput("reproduction", document, frame, ok=ok)


def cmd_witness(args):
    kind = args.kind
    if kind == "tau-pair":
        field = field_for(p=args.p) if args.p is not None else field_for(L=args.L)
        witness = tau_collision_pair(args.n, field)
    elif kind == "binomial-pair":
        witness = binomial_collision_pair(args.L, seed=args.seed)
    elif kind == "unary-forced":
        witness = unary_forced_collision(args.L, args.char, seed=args.seed)
    elif kind == "hT-family":
        witness = hT_family(args.L, args.wrap, seed=args.seed).witness
    elif kind == "perfect-unary":
        witness = perfect_unary_witness(args.L)
    else:
        if args.family is None:
            raise UsageError(f"{kind} needs --family\nfamily spec grammar: {SPEC_GRAMMAR}")
        spec = parse_family_spec(args.family)
        witness = threewise_break(spec, args.budget) if kind == "threewise-break" else fourwise_break(spec, args.budget)
    document = to_jsonable(witness)
    frame = pd.DataFrame(
        [
            {
                "kind": witness.kind,
                "strings": " | ".join(format_string(s) for s in witness.strings),
                "lengths": " | ".join(str(n) for n in witness.lengths),
                "claim": fraction_text(witness.claim),
                "mode": witness.certificate.mode,
                "passed": witness.certificate.passed,
                "measured": fraction_text(witness.certificate.measured),
            }
        ]
    )
    text = "".join(f"{key}: {value}\n" for key, value in frame.iloc[0].items())
    text += f"detail: {witness.certificate.detail}\n"
    return CommandOutput("witness", document, frame, text)


def cmd_bounds(args):
    target = args.target
    if target == "row":
        row = table_bounds(args.L, args.epsilon)
        document = {f.name: getattr(row, f.name) for f in fields(row)}
    elif target == "min-family":
        if args.K is None:
            raise UsageError("min-family needs --K")
        document = {
            "K": args.K,
            "L": args.L,
            "epsilon": args.epsilon,
            "min_size": min_family_size(args.K, args.L, args.epsilon),
        }
    elif target == "stinson":
        if args.a is None or args.b is None:
            raise UsageError("stinson needs --a and --b")
        document = {
            "a": args.a,
            "b": args.b,
            "strong": args.strong,
            "min_size": stinson_min_size(args.a, args.b, args.strong),
        }
    else:
        document = {
            "L": args.L,
            "epsilon": args.epsilon,
            "length": epsilon_impossible_length(args.L, args.epsilon),
        }
    flat = to_jsonable(document)
    frame = pd.DataFrame([{key: fraction_text(document[key]) for key in flat}])
    text = "".join(f"{key}: {fraction_text(document[key])}\n" for key in flat)
    return CommandOutput("bound_rows", flat, frame, text)


def cmd_bench(args):
    word_bits = _int_list(args.L) if args.L else None
    frame = run_bench(rounds=args.rounds, seed=args.seed, **({"word_bits": word_bits} if word_bits else {}))
    return CommandOutput("bench", frame.to_dict(orient="records"), frame)


COMMANDS = {
    "hash": cmd_hash,
    "verify": cmd_verify,
    "table": cmd_table,
    "witness": cmd_witness,
    "bounds": cmd_bounds,
    "bench": cmd_bench,
}


# ---------------------------------------------------------------------------
# Rendering and entry point
# ---------------------------------------------------------------------------

def render(output, fmt):
    if fmt == "json":
        return render_json(output.document)
    if fmt == "csv":
        if output.frame is None:
            raise UsageError(f"{output.kind} has no CSV form")
        return render_csv(output.frame)
    if output.text is not None:
        return output.text
    if output.frame is not None:
        return output.frame.to_string(index=False) + "\n"
    return render_json(output.document)


def _save(output, argv):
    from database import save_document

    row_id = save_document(output.kind, output.document, argv)
    logger.info(f"saved {output.kind} as row {row_id}")


def run(argv=None, stdout=None):
    """Parse, dispatch, render; returns the exit status."""
    argv = list(sys.argv[1:] if argv is None else argv)
    stdout = stdout or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        if args.log_level:
            configure_logging(args.log_level)
        if args.budget is not None and args.budget < 1:
            raise UsageError("--budget must be positive")
        output = COMMANDS[args.command](args)
        text = render(output, args.format or DEFAULT_FORMAT[args.command])
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="\n") as f:
                f.write(text)
        else:
            stdout.write(text)
        if args.save:
            _save(output, argv)
        return 0 if output.ok else 1
    except LabError as e:
        logger.error(str(e))
        return e.exit_code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
