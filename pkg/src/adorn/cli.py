"""Command-line interface.

Subcommands: abelianize, series, alexander, classify-seifert, zoo,
verify-corpus.  Every command accepts ``--json`` for a machine-readable
report with the fixed shape {input, command, limits, stages, verdict,
timings_ms}; exit codes are the only pass/fail channel (0 success, 2 bad
input, 3 inconclusive under --strict, 1 corpus failures).

When ``ADORN_CACHE_DIR`` is set, series runs persist each rewrite step as a
JSON file keyed by a content hash of (presentation, limits), making long
runs resumable.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from .abelian import abelianization
from .alexander import AlexanderError, knot_adorability_report
from .cosets import EnumerationCaps
from .derived import INCONCLUSIVE, SeriesLimits, derived_series
from .fpgroup import (GroupPresentation, PresentationSyntaxError,
                      SimplificationCaps, format_presentation,
                      parse_presentation)
from .zoo import FAMILIES, SeifertData, classify_seifert, make


class CliError(Exception):
    def __init__(self, message: str, code: int = 2):
        super().__init__(message)
        self.code = code


class FileStepCache:
    """Step cache persisted as JSON files in a directory."""

    def __init__(self, directory: str):
        self.directory = directory
        os.makedirs(directory, exist_ok=True)

    def _path(self, key: str) -> str:
        return os.path.join(self.directory, f"{key}.json")

    def get(self, key: str) -> dict | None:
        try:
            with open(self._path(key)) as fh:
                return json.load(fh)
        except (OSError, ValueError):
            return None

    def put(self, key: str, value: dict) -> None:
        with open(self._path(key), "w") as fh:
            json.dump(value, fh)


def _split_top_level(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    if cur:
        parts.append("".join(cur).strip())
    return [p for p in parts if p]


def _zoo_expr(text: str) -> GroupPresentation:
    text = text.strip()
    if "(" in text:
        name, _, rest = text.partition("(")
        if not rest.endswith(")"):
            raise CliError(f"malformed zoo expression {text!r}")
        return _make_from_strings(name.strip(), _split_top_level(rest[:-1]))
    return _make_from_strings(text, [])


def _make_from_strings(family: str, params: list[str]) -> GroupPresentation:
    try:
        if family in ("free_product", "direct_product"):
            if len(params) != 2:
                raise CliError(f"{family} needs exactly two factor expressions")
            return make(family, tuple(_zoo_expr(p) for p in params))
        if family == "fuchsian":
            if not params:
                raise CliError("fuchsian needs genus followed by cone indices")
            return make(family, (int(params[0]), tuple(int(x) for x in params[1:])))
        return make(family, tuple(int(x) for x in params))
    except ValueError as exc:
        raise CliError(str(exc)) from exc


def _resolve_input(args) -> GroupPresentation:
    if getattr(args, "zoo", None):
        if getattr(args, "input", None):
            raise CliError("give either an inline presentation or --zoo, not both")
        return _make_from_strings(args.zoo, _split_top_level(args.params or ""))
    if getattr(args, "input", None):
        try:
            return parse_presentation(args.input)
        except PresentationSyntaxError as exc:
            raise CliError(f"parse error: {exc}") from exc
        except ValueError as exc:
            raise CliError(str(exc)) from exc
    raise CliError("no input: pass a presentation string or --zoo NAME")


def _limits(args) -> SeriesLimits:
    try:
        return SeriesLimits(
            max_depth=args.max_depth,
            enumeration=EnumerationCaps(max_cosets=args.max_cosets),
            simplification=SimplificationCaps(
                max_generators=args.max_gens,
                max_total_relator_length=args.max_length),
            wall_clock_seconds=args.timeout)
    except ValueError as exc:
        raise CliError(str(exc)) from exc


def _report(command: str, input_desc: str, limits: dict | None,
            stages: list, verdict: dict, started: float) -> dict:
    return {
        "input": input_desc,
        "command": command,
        "limits": limits or {},
        "stages": stages,
        "verdict": verdict,
        "timings_ms": {"total": round(1000 * (time.monotonic() - started), 3)},
    }


def _emit(args, report: dict, human: str) -> None:
    if getattr(args, "json", False):
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        print(human)


def _limits_dict(lim: SeriesLimits) -> dict:
    return {
        "max_depth": lim.max_depth,
        "max_cosets": lim.enumeration.max_cosets,
        "max_generators": lim.simplification.max_generators,
        "max_total_relator_length": lim.simplification.max_total_relator_length,
        "timeout_seconds": lim.wall_clock_seconds,
    }


def cmd_abelianize(args) -> int:
    started = time.monotonic()
    p = _resolve_input(args)
    inv = abelianization(p)
    verdict = {"kind": "Abelianization",
               "detail": {"invariants": str(inv), "rank": inv.rank,
                          "torsion": list(inv.torsion)}}
    report = _report("abelianize", p.name or format_presentation(p), None,
                     [], verdict, started)
    _emit(args, report, str(inv))
    return 0


def cmd_series(args) -> int:
    started = time.monotonic()
    p = _resolve_input(args)
    lim = _limits(args)
    cache_dir = os.environ.get("ADORN_CACHE_DIR")
    cache = FileStepCache(cache_dir) if cache_dir else None
    stages, verdict = derived_series(p, lim, step_cache=cache)
    report = _report("series", p.name or format_presentation(p),
                     _limits_dict(lim), [s.to_dict() for s in stages],
                     verdict.to_dict(), started)
    lines = []
    for s in stages:
        flags = f"  [{', '.join(sorted(s.flags))}]" if s.flags else ""
        lines.append(f"stage {s.depth}: gens={s.n_generators} "
                     f"relators={s.n_relators} length={s.total_length} "
                     f"quotient={s.invariants}{flags}")
    lines.append(f"verdict: {verdict}")
    _emit(args, report, "\n".join(lines))
    if args.strict and verdict.kind == INCONCLUSIVE:
        return 3
    return 0


def cmd_alexander(args) -> int:
    started = time.monotonic()
    p = _resolve_input(args)
    try:
        rep = knot_adorability_report(p)
    except AlexanderError as exc:
        raise CliError(f"not a knot-like presentation: {exc}") from exc
    kind = "Adorable" if rep.adorable else "NotAdorable"
    report = _report("alexander", p.name or format_presentation(p), None, [],
                     {"kind": kind, "detail": rep.to_dict()}, started)
    _emit(args, report, f"Δ = {rep.polynomial}, {rep.verdict}")
    return 0


def cmd_classify_seifert(args) -> int:
    started = time.monotonic()
    cones = tuple(int(x) for x in _split_top_level(args.cones or ""))
    try:
        data = SeifertData(base_genus=args.genus, cone_indices=cones,
                           has_boundary=args.boundary)
        result = classify_seifert(data)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    desc = (f"seifert(genus={args.genus}, cones={list(cones)}, "
            f"boundary={args.boundary})")
    report = _report("classify-seifert", desc, None, [],
                     {"kind": result.branch, "detail": {"trace": list(result.trace)}},
                     started)
    _emit(args, report, f"{result.branch} ({result.trace[0]})")
    return 0


def cmd_zoo(args) -> int:
    started = time.monotonic()
    if not args.family:
        listing = "\n".join(FAMILIES)
        report = _report("zoo", "", None, [],
                         {"kind": "Families", "detail": {"families": list(FAMILIES)}},
                         started)
        _emit(args, report, listing)
        return 0
    p = _make_from_strings(args.family, _split_top_level(args.params or ""))
    report = _report("zoo", p.name, None, [],
                     {"kind": "Presentation",
                      "detail": {"presentation": format_presentation(p)}},
                     started)
    _emit(args, report, format_presentation(p))
    return 0


# ---------------------------------------------------------------------------
# corpus verification

_EXPECT_KEYS = {"abelianization", "verdict", "doa", "alexander", "seifert_branch"}


def _corpus_input(entry: dict):
    src = entry.get("input")
    if isinstance(src, str):
        return parse_presentation(src)
    if isinstance(src, dict) and "zoo" in src:
        params = []
        for x in src.get("params", []):
            params.append(_corpus_input({"input": x}) if isinstance(x, dict) else x)
        if src["zoo"] == "fuchsian":
            return make("fuchsian", (params[0], tuple(params[1])))
        return make(src["zoo"], tuple(params))
    if isinstance(src, dict) and "seifert" in src:
        d = src["seifert"]
        return SeifertData(base_genus=d.get("genus", 0),
                           cone_indices=tuple(d.get("cones", [])),
                           has_boundary=d.get("boundary", False))
    raise CliError(f"corpus entry {entry.get('name')!r}: bad input field")


def _check_entry(entry: dict, lim: SeriesLimits) -> list[tuple[str, str, str, bool]]:
    expect = entry.get("expect", {})
    unknown = set(expect) - _EXPECT_KEYS
    if unknown:
        raise CliError(f"corpus entry {entry.get('name')!r}: unknown expectation "
                       f"keys {sorted(unknown)}")
    subject = _corpus_input(entry)
    rows = []
    presentation_keys = {"abelianization", "verdict", "doa", "alexander"} & set(expect)
    if isinstance(subject, SeifertData) and presentation_keys:
        raise CliError(f"corpus entry {entry.get('name')!r}: "
                       f"{sorted(presentation_keys)} need a presentation input")
    if "seifert_branch" in expect:
        if not isinstance(subject, SeifertData):
            raise CliError(f"corpus entry {entry.get('name')!r}: seifert_branch "
                           f"needs a seifert input")
        got = classify_seifert(subject).branch
        want = expect["seifert_branch"]
        rows.append(("seifert_branch", str(want), got, got == want))
    if "abelianization" in expect:
        got = str(abelianization(subject))
        want = expect["abelianization"]
        rows.append(("abelianization", str(want), got, got == want))
    if "verdict" in expect or "doa" in expect:
        _, verdict = derived_series(subject, lim)
        if "verdict" in expect:
            want = expect["verdict"]
            rows.append(("verdict", str(want), verdict.kind, verdict.kind == want))
        if "doa" in expect:
            want = expect["doa"]
            got = verdict.doa
            rows.append(("doa", str(want), str(got), got == want))
    if "alexander" in expect:
        got = str(knot_adorability_report(subject).polynomial)
        want = expect["alexander"]
        rows.append(("alexander", str(want), got, got == want))
    return rows


def cmd_verify_corpus(args) -> int:
    lim = _limits(args)
    ok = True
    for path in args.paths:
        try:
            with open(path) as fh:
                entries = json.load(fh)
        except (OSError, ValueError) as exc:
            raise CliError(f"cannot read corpus {path}: {exc}") from exc
        if not isinstance(entries, list):
            raise CliError(f"corpus {path}: expected a JSON array of entries")
        for entry in entries:
            name = entry.get("name", "<unnamed>")
            try:
                rows = _check_entry(entry, lim)
            except CliError:
                raise
            except Exception as exc:  # computation failed outright
                ok = False
                print(f"FAIL {name}: error: {exc}")
                continue
            for check, want, got, passed in rows:
                ok = ok and passed
                status = "pass" if passed else "FAIL"
                print(f"{status:4} {name}: {check} expected {want!r} got {got!r}")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="adorn",
        description="derived series, adorability verdicts, and friends for "
                    "finitely presented groups")
    sub = parser.add_subparsers(dest="cmd", required=True)

    def add_input(sp, with_limits=False):
        sp.add_argument("input", nargs="?", help="presentation, e.g. '< a, b | a^2 >'")
        sp.add_argument("--zoo", metavar="NAME", help="zoo family name")
        sp.add_argument("--params", metavar="CSV", help="zoo family parameters")
        sp.add_argument("--json", action="store_true", help="emit a JSON report")
        if with_limits:
            add_limits(sp)

    def add_limits(sp):
        sp.add_argument("--max-depth", type=int, default=6)
        sp.add_argument("--max-cosets", type=int, default=20000)
        sp.add_argument("--max-gens", type=int, default=64)
        sp.add_argument("--max-length", type=int, default=65536)
        sp.add_argument("--timeout", type=float, default=60.0, metavar="SECS")

    sp = sub.add_parser("abelianize", help="print the abelianization")
    add_input(sp)
    sp.set_defaults(fn=cmd_abelianize)

    sp = sub.add_parser("series", help="run the derived-series engine")
    add_input(sp, with_limits=True)
    sp.add_argument("--strict", action="store_true",
                    help="exit 3 when the verdict is Inconclusive")
    sp.set_defaults(fn=cmd_series)

    sp = sub.add_parser("alexander", help="Alexander polynomial and knot verdict")
    add_input(sp)
    sp.set_defaults(fn=cmd_alexander)

    sp = sub.add_parser("classify-seifert", help="Seifert base-orbifold classifier")
    sp.add_argument("--genus", type=int, required=True)
    sp.add_argument("--cones", metavar="CSV", default="")
    sp.add_argument("--boundary", action="store_true")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(fn=cmd_classify_seifert)

    sp = sub.add_parser("zoo", help="list families or print a presentation")
    sp.add_argument("family", nargs="?")
    sp.add_argument("--params", metavar="CSV")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(fn=cmd_zoo)

    sp = sub.add_parser("verify-corpus", help="run a JSON corpus of expectations")
    sp.add_argument("paths", nargs="+", metavar="PATH")
    add_limits(sp)
    sp.set_defaults(fn=cmd_verify_corpus)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except BrokenPipeError:
        return 0


if __name__ == "__main__":
    sys.exit(main())
