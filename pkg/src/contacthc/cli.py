"""Command-line front end: ``hc index|orbits|homology|hc|words|shift``.

Exit codes: 0 ok, 2 parse error, 3 invalid data, 4 degenerate level,
5 failed consistency check, 6 budget exceeded.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Any, Optional

import jsonschema

from . import __version__
from .contact_homology import (
    Target,
    build_hc_complex,
    check_degree_shift,
    default_m_o,
    hc_ranks_chain,
    hc_ranks_closed_form_window,
)
from .errors import (
    BoundarySquareNonzero,
    BudgetExceeded,
    DegenerateLevel,
    InvalidData,
    NonRegularCrossing,
    NotSymplectic,
)
from .handle_dynamics import ModelHandle, enumerate_orbits
from .morse_complex import CriticalPoint, MorseData, homology_ranks, validate
from .symplectic_index import (
    BlockPath,
    ConstantIdentity,
    Hyperbolic,
    Rotation,
    classify_return_map,
    is_good,
    parse_real,
    reduced_index,
    rs_index_blocks,
    rs_index_numeric,
)
from .word_combinatorics import DEFAULT_CAP, verify_word_lemma

EXIT_OK, EXIT_PARSE, EXIT_INVALID, EXIT_LEVEL, EXIT_CHECK, EXIT_BUDGET = 0, 2, 3, 4, 5, 6


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


@dataclass
class Result:
    command: str
    columns: list
    rows: list
    meta: dict = field(default_factory=dict)
    exit_code: int = EXIT_OK


def load_schema(name: str) -> dict:
    text = resources.files("contacthc").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


# -- input documents --------------------------------------------------------------


@dataclass
class Document:
    n: int
    morse: MorseData
    handles: dict
    options: dict


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text.replace(" ", ""))
    except (ValueError, ZeroDivisionError) as exc:
        raise CliError(EXIT_PARSE, f"not a rational: {text!r}") from exc


def parse_document(raw: Any) -> Document:
    try:
        jsonschema.validate(raw, load_schema("document"))
    except jsonschema.ValidationError as exc:
        path = "/".join(map(str, exc.absolute_path)) or "<root>"
        raise CliError(EXIT_PARSE, f"document does not match the schema at {path}: {exc.message}") from exc
    n = raw["n"]
    m = raw["morse"]
    points = tuple(
        CriticalPoint(p["id"], p["index"], _rational(p["h"]) if "h" in p else None)
        for p in m["critical_points"]
    )
    boundary = {}
    for e in m.get("boundary", []):
        key = (e["from"], e["to"])
        if key in boundary:
            raise CliError(EXIT_PARSE, f"boundary entry {key} is listed twice")
        boundary[key] = e["a"]
    morse = MorseData(n, points, boundary, m.get("single_minimum", True))
    index = {p.id: p.index for p in points}
    handles = {}
    for pid, hd in raw.get("handles", {}).items():
        if pid not in index:
            raise CliError(EXIT_INVALID, f"handle {pid!r} does not name a critical point")
        if hd["k"] != index[pid]:
            raise CliError(EXIT_INVALID, f"handle {pid!r} has k = {hd['k']} but the point has index {index[pid]}")
        try:
            handles[pid] = ModelHandle(n, hd["k"], _rational(hd["b"]), _rational(hd["b_prime"]),
                                       [_rational(c) for c in hd["c_sq"]], _rational(hd["level"]))
        except ValueError as exc:
            raise CliError(EXIT_INVALID, f"handle {pid!r}: {exc}") from exc
    return Document(n, morse, handles, dict(raw.get("options", {})))


def read_document(path: str) -> Document:
    try:
        if path == "-":
            raw = json.load(sys.stdin)
        else:
            with open(path, encoding="utf-8") as fh:
                raw = json.load(fh)
    except OSError as exc:
        raise CliError(EXIT_PARSE, f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise CliError(EXIT_PARSE, f"{path} is not valid JSON: {exc}") from exc
    return parse_document(raw)


def _window(args, doc: Optional[Document]) -> tuple:
    if args.window is not None:
        return args.window
    if doc is not None and "window" in doc.options:
        lo, hi = doc.options["window"]
        return (lo, hi)
    return (0, 20)


def _m_o(args, doc: Optional[Document], hi: int) -> int:
    if args.m_o is not None:
        return args.m_o
    if doc is not None and "m_o" in doc.options:
        return doc.options["m_o"]
    return default_m_o(hi)


def _seed(args, doc: Optional[Document]) -> int:
    if args.seed is not None:
        return args.seed
    if doc is not None and "seed" in doc.options:
        return doc.options["seed"]
    return 0


def _require_valid(d: MorseData) -> None:
    violations = validate(d)
    if violations:
        raise CliError(EXIT_INVALID, "invalid Morse data: " + "; ".join(map(str, violations)))


# -- argument types -----------------------------------------------------------------


def window_arg(text: str) -> tuple:
    try:
        lo, hi = text.split(":")
        return (int(lo), int(hi))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}")


def real_arg(text: str):
    try:
        return parse_real(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a real number: {text!r}")


def positive_real_arg(text: str):
    value = real_arg(text)
    if not float(value) > 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return value


def pair_arg(text: str) -> tuple:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected A,B, got {text!r}")
    return tuple(positive_real_arg(p) for p in parts)


class AppendBlock(argparse.Action):
    """Collect block generators in command-line order."""

    def __call__(self, parser, namespace, values, option_string=None):
        blocks = list(getattr(namespace, self.dest) or [])
        if self.const == "identity":
            blocks.append(ConstantIdentity())
        elif self.const == "rotation":
            blocks.append(Rotation(values))
        else:
            blocks.append(Hyperbolic(*values))
        setattr(namespace, self.dest, blocks)


# -- commands ---------------------------------------------------------------------


def cmd_index(args) -> Result:
    if not args.blocks:
        raise CliError(EXIT_PARSE, "give at least one of --rotation, --hyperbolic, --identity")
    path = BlockPath(args.blocks, args.T)
    try:
        mu = rs_index_numeric(path)
    except NonRegularCrossing as exc:
        raise CliError(EXIT_INVALID, f"non-regular crossing: {exc}") from exc
    except ValueError as exc:
        raise CliError(EXIT_INVALID, str(exc)) from exc
    closed = rs_index_blocks(path)
    cls = classify_return_map(path)
    n = path.dim // 2 + 1
    row = {
        "mu": _index_cell(mu),
        "mu_closed_form": _index_cell(closed),
        "reduced": _index_cell(reduced_index(mu, n)),
        "n": n,
        "n_gamma": cls.n_gamma,
        "degenerate": cls.degenerate,
        "good": is_good(cls.n_gamma, args.multiplicity),
        "eigenvalues": " ".join(f"{z.real:.12g}{z.imag:+.12g}j" for z in cls.eigenvalues),
    }
    meta = {"blocks": " ".join(_block_label(b) for b in args.blocks), "T": str(args.T),
            "multiplicity": args.multiplicity}
    res = Result("index", list(row), [row], meta)
    if mu != closed:
        res.exit_code = EXIT_CHECK
    return res


def _index_cell(v):
    # half-integers stay exact as strings
    return v.value if v.is_integer else str(v.value)


def _block_label(b) -> str:
    if isinstance(b, Rotation):
        return f"rotation({str(b.omega)})"
    if isinstance(b, Hyperbolic):
        return f"hyperbolic({str(b.a)},{str(b.b)})"
    return "identity"


def cmd_orbits(args) -> Result:
    doc = read_document(args.document)
    if not doc.handles:
        raise CliError(EXIT_INVALID, "the document has no handles")
    hid = args.handle or sorted(doc.handles)[0]
    if hid not in doc.handles:
        raise CliError(EXIT_INVALID, f"no handle {hid!r}; available: {', '.join(sorted(doc.handles))}")
    h = doc.handles[hid]
    cutoff = args.cutoff
    if cutoff is None:
        if "action_cutoff" not in doc.options:
            raise CliError(EXIT_PARSE, "give --cutoff or options.action_cutoff")
        try:
            cutoff = parse_real(doc.options["action_cutoff"])
        except (ValueError, ZeroDivisionError) as exc:
            raise CliError(EXIT_PARSE, f"bad action_cutoff {doc.options['action_cutoff']!r}") from exc
    try:
        orbits = enumerate_orbits(h, cutoff) if float(cutoff) > 0 else []
    except DegenerateLevel as exc:
        raise CliError(EXIT_LEVEL, str(exc)) from exc
    if float(cutoff) <= 0 and h.level <= 0:
        raise CliError(EXIT_LEVEL, f"level {h.level} <= 0 carries no periodic Reeb orbits")
    actions = [o.action.coeff for o in orbits]
    rows = []
    for o in orbits:
        rows.append({
            "l": o.l,
            "m": o.m,
            "period": str(o.hamiltonian_period),
            "action": str(o.action),
            "action_value": float(o.action),
            "mu": None if o.mu is None else o.mu.value,
            "reduced": None if o.reduced is None else o.reduced.value,
            "nondegenerate": o.nondegenerate,
            "good": o.good,
            "action_tie": actions.count(o.action.coeff) > 1,
        })
    cols = ["l", "m", "period", "action", "action_value", "mu", "reduced", "nondegenerate", "good", "action_tie"]
    meta = {"handle": hid, "cutoff": str(cutoff), "n": h.n, "k": h.k,
            "c_sq": " ".join(map(str, h.c_sq)), "level": str(h.level)}
    return Result("orbits", cols, rows, meta)


def cmd_homology(args) -> Result:
    doc = read_document(args.document)
    _require_valid(doc.morse)
    betti = homology_ranks(doc.morse)
    rows = [{"degree": j, "rank": betti[j]} for j in range(doc.n)]
    return Result("homology", ["degree", "rank"], rows, {"n": doc.n})


def cmd_hc(args) -> Result:
    doc = read_document(args.document)
    _require_valid(doc.morse)
    lo, hi = _window(args, doc)
    m_o = _m_o(args, doc, hi)
    target = Target.M if args.target == "M" else Target.M_PRIME
    columns = ["degree"]
    chain = closed = None
    if args.route in ("chain", "both"):
        try:
            chain = hc_ranks_chain(build_hc_complex(doc.morse, m_o, (lo, hi), target))
        except BoundarySquareNonzero as exc:
            raise CliError(EXIT_INVALID, str(exc)) from exc
        columns.append("rank_chain")
    if args.route in ("closed", "both"):
        closed = hc_ranks_closed_form_window(doc.morse, (lo, hi), target)
        columns.append("rank_closed")
    rows = []
    disagree = False
    for deg in range(lo, hi + 1):
        row = {"degree": deg}
        if chain is not None:
            row["rank_chain"] = chain[deg]
        if closed is not None:
            row["rank_closed"] = closed[deg]
        if chain is not None and closed is not None and chain[deg] != closed[deg]:
            disagree = True
        rows.append(row)
    meta = {"n": doc.n, "target": target.value, "route": args.route, "window": f"{lo}:{hi}", "m_o": m_o}
    res = Result("hc", columns, rows, meta)
    if disagree:
        res.exit_code = EXIT_CHECK
    return res


def cmd_words(args) -> Result:
    seed = _seed(args, None)
    try:
        report = verify_word_lemma(args.n, args.mode, samples=args.samples, seed=seed, cap=args.cap)
    except BudgetExceeded as exc:
        raise CliError(EXIT_BUDGET, str(exc)) from exc
    rows = [{"word": str(w)} for w in report.counterexamples]
    meta = {
        "n": args.n,
        "mode": args.mode,
        "length": report.length,
        "words": report.words_checked,
        "counterexamples": len(report.counterexamples),
        "seed": seed,
        "summary": f"{report.words_checked} words, {len(report.counterexamples)} counterexamples",
    }
    res = Result("words", ["word"], rows, meta)
    if not report.ok:
        res.exit_code = EXIT_CHECK
    return res


def cmd_shift(args) -> Result:
    doc = read_document(args.document)
    _require_valid(doc.morse)
    lo, hi = _window(args, doc)
    report = check_degree_shift(doc.morse, (lo, hi))
    rows = [{"degree": i, "rank_M": a, "rank_M_prime_shifted": b, "match": a == b}
            for i, a, b in report.rows]
    meta = {"n": doc.n, "window": f"{lo}:{hi}", "mismatches": len(report.mismatches)}
    res = Result("shift", ["degree", "rank_M", "rank_M_prime_shifted", "match"], rows, meta)
    if not report.ok:
        res.exit_code = EXIT_CHECK
    return res


# -- rendering --------------------------------------------------------------------


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _json_value(v):
    if isinstance(v, Fraction):
        return str(v)
    return v


def render(res: Result, fmt: str) -> str:
    if fmt == "json":
        doc = {
            "command": res.command,
            "version": __version__,
            "meta": {k: _json_value(v) for k, v in res.meta.items()},
            "columns": res.columns,
            "rows": [{c: _json_value(r.get(c)) for c in res.columns} for r in res.rows],
        }
        return json.dumps(doc, indent=2, sort_keys=False) + "\n"
    header = [f"# hc {res.command} (contacthc {__version__})"]
    header += [f"# {k}: {_cell(v)}" for k, v in res.meta.items()]
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(res.columns)
        for r in res.rows:
            writer.writerow([_cell(r.get(c)) for c in res.columns])
        return "\n".join(header) + "\n" + buf.getvalue()
    cells = [res.columns] + [[_cell(r.get(c)) for c in res.columns] for r in res.rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(res.columns))]
    lines = ["  ".join(v.rjust(w) for v, w in zip(row, widths)).rstrip() for row in cells]
    if not res.rows:
        lines.append("(no rows)")
    return "\n".join(header + lines) + "\n"


# -- entry point --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hc", description="Contact homology of subcritical Stein fillings.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["table", "csv", "json"], default="table")
    common.add_argument("--seed", type=int, help="seed for randomized checks (recorded in the output)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("index", parents=[common], help="index of a block symplectic path")
    p.add_argument("--rotation", dest="blocks", action=AppendBlock, const="rotation", type=positive_real_arg,
                   metavar="OMEGA", help="rotation block with angular speed OMEGA")
    p.add_argument("--hyperbolic", dest="blocks", action=AppendBlock, const="hyperbolic", type=pair_arg,
                   metavar="A,B", help="hyperbolic block exp(t [[0,B],[A,0]])")
    p.add_argument("--identity", dest="blocks", action=AppendBlock, const="identity", nargs=0,
                   help="constant identity block")
    p.add_argument("--T", type=real_arg, required=True, help="duration, e.g. 4.0, 2/3 or 3/2pi")
    p.add_argument("--multiplicity", type=int, default=1, help="cover multiplicity for the goodness test")
    p.set_defaults(func=cmd_index, blocks=[])

    p = sub.add_parser("orbits", parents=[common], help="periodic Reeb orbits of a model handle")
    p.add_argument("document")
    p.add_argument("--handle", help="critical point id of the handle (default: first)")
    p.add_argument("--cutoff", type=real_arg, help="action cutoff, e.g. 3pi")
    p.set_defaults(func=cmd_orbits)

    p = sub.add_parser("homology", parents=[common], help="Betti numbers of the filling")
    p.add_argument("document")
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("hc", parents=[common], help="contact homology ranks")
    p.add_argument("document")
    p.add_argument("--target", choices=["M", "Mprime"], default="M")
    p.add_argument("--route", choices=["chain", "closed", "both"], default="both")
    p.add_argument("--window", type=window_arg, metavar="LO:HI")
    p.add_argument("--m-o", dest="m_o", type=int, metavar="N")
    p.set_defaults(func=cmd_hc)

    p = sub.add_parser("words", parents=[common], help="check the basin lemma for jumpy words")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=["exhaustive", "randomized"], default="exhaustive")
    p.add_argument("--samples", type=int, default=1_000_000)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="largest exhaustive enumeration allowed")
    p.set_defaults(func=cmd_words)

    p = sub.add_parser("shift", parents=[common], help="compare HC of M and its stabilization")
    p.add_argument("document")
    p.add_argument("--window", type=window_arg, metavar="LO:HI")
    p.set_defaults(func=cmd_shift)
    return parser


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "words" and args.n < 2:
        parser.error("--n must be at least 2")
    try:
        res = args.func(args)
    except CliError as exc:
        print(f"hc: error: {exc}", file=sys.stderr)
        return exc.code
    except InvalidData as exc:
        print(f"hc: error: invalid Morse data: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NotSymplectic as exc:
        print(f"hc: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    sys.stdout.write(render(res, args.format))
    return res.exit_code


if __name__ == "__main__":
    sys.exit(main())
