"""``finkat`` command line: analyze, check, spec, verify and corpus."""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Optional

from . import __version__
from .corpus import CORPUS_NAMES, CorpusEntry, CorpusError, load_corpus
from .dsl import ParseError, parse
from .essentials import (
    Condition,
    check_condition,
    is_essential_mono,
    pb_stability,
)
from .functors import FAIL, NOT_APPLICABLE, PASS
from .kernel import CategoryError, as_tier, classify_basic, validate
from .spectral import SpecError, spec_build
from .theorems import THEOREMS, run_theorem

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
SCHEMA_PATH = Path(__file__).with_name("report.schema.json")


class InputError(Exception):
    pass


def _load(args) -> CorpusEntry:
    src = args.corpus
    if src.endswith(".fincat"):
        path = Path(src)
        try:
            doc = parse(path.read_text(encoding="utf-8"))
        except OSError as exc:
            raise InputError(f"cannot read {src}: {exc}") from exc
        except ParseError as exc:
            raise InputError(f"{src}: {exc}") from exc
        return CorpusEntry(doc.name, as_tier(doc.category))
    try:
        return load_corpus(src, args.core, args.ambient)
    except (CorpusError, ValueError) as exc:
        raise InputError(str(exc)) from exc


def _require_valid(entry: CorpusEntry):
    rep = validate(entry.tier)
    if not rep.valid:
        raise InputError(f"{entry.name} is not a category: {rep.violations[0]}")


# ---------------------------------------------------------------------------
# commands; each returns (status, payload, text lines)


def cmd_analyze(args):
    entry = _load(args)
    T = entry.tier
    cat = T.ambient
    rep = validate(T)
    rows = []
    if rep.valid:
        for m in T.core_morphisms():
            fl = classify_basic(T, m)
            row = {
                "morphism": cat.show(m),
                "dom": cat.show_object(cat.dom(m)),
                "cod": cat.show_object(cat.cod(m)),
                "mono": fl.mono,
                "epi": fl.epi,
                "split_mono": fl.split_mono,
                "split_epi": fl.split_epi,
                "iso": fl.iso,
                "bimorphism": fl.bimorphism,
                "essential": is_essential_mono(T, m),
                "pb_stable_essential": pb_stability(T, m).holds,
            }
            rows.append(row)
    payload = {
        "validation": {"valid": rep.valid, "violations": list(rep.violations)},
        "morphisms": rows,
    }
    flags = ("mono", "epi", "split_mono", "split_epi", "iso", "essential", "pb_stable_essential")
    head = f"{'morphism':<28} " + " ".join(f"{f[:6]:>6}" for f in flags)
    lines = [f"{entry.name}: {'valid' if rep.valid else 'INVALID'}"]
    lines += [f"  violation: {v}" for v in rep.violations]
    if rows:
        lines.append(head)
        for r in rows:
            lines.append(f"{r['morphism']:<28} " + " ".join(f"{('yes' if r[f] else '-'):>6}" for f in flags))
    return (PASS if rep.valid else FAIL), entry.name, payload, lines


def cmd_check(args):
    entry = _load(args)
    _require_valid(entry)
    try:
        tag = Condition(args.condition)
    except ValueError:
        raise InputError(
            f"unknown condition {args.condition!r}; known: {', '.join(c.value for c in Condition)}"
        ) from None
    if args.side == "X":
        if entry.localization is None:
            raise InputError(f"{entry.name} has no localization, so no X side")
        T = entry.localization.X
    else:
        T = entry.tier
    v = check_condition(T, tag)
    shown = T.ambient.show(v.witness[0]) if v.witness else None
    payload = {
        "condition": tag.value,
        "side": args.side,
        "holds": v.holds,
        "witness": shown,
        "bounded": v.bounded,
        "detail": v.detail,
    }
    line = f"{tag.value} on {T.name}: {'holds' if v.holds else 'fails'}"
    if shown:
        line += f" (witness {shown})"
    if v.bounded:
        line += " [bounded]"
    return PASS, entry.name, payload, [line]


def cmd_spec(args):
    entry = _load(args)
    _require_valid(entry)
    T = entry.tier
    cat = T.ambient
    try:
        spec = spec_build(T, args.span_cap)
    except SpecError as exc:
        raise InputError(str(exc)) from exc
    homs = [
        {"from": cat.show_object(a), "to": cat.show_object(b), "size": spec.hom_size(a, b)}
        for a in T.core
        for b in T.core
    ]
    bad = spec.checks["violations"]
    payload = {
        "objects": [cat.show_object(a) for a in T.core],
        "inverted": len(spec.S),
        "morphisms": sum(h["size"] for h in homs),
        "hom_sizes": homs,
        "violations": list(bad),
    }
    lines = [f"Spec({entry.name}): {len(T.core)} objects, {payload['morphisms']} morphisms, "
             f"{len(spec.S)} inverted morphisms"]
    lines += [f"  |Hom({h['from']}, {h['to']})| = {h['size']}" for h in homs]
    lines += [f"  violation: {v}" for v in bad]
    return (FAIL if bad else PASS), entry.name, payload, lines


def cmd_verify(args):
    tid = args.theorem
    if tid not in THEOREMS:
        raise InputError(f"unknown theorem id {tid!r}; known: {', '.join(THEOREMS)}")
    spec = THEOREMS[tid]
    entry = None
    if spec.needs_localization:
        if args.corpus is None:
            args.corpus = spec.default_corpus
        entry = _load(args)
    try:
        res = run_theorem(tid, entry, args.span_cap)
    except SpecError as exc:
        raise InputError(str(exc)) from exc
    d = res.as_dict()
    d["theorem"] = tid
    lines = [f"{tid} [{res.claim}] on {entry.name if entry else 'built-in corpus'}: {res.status}"]
    if res.witness:
        lines.append(f"  witness: {res.witness}")
    lines.append(f"  checked: {res.checked}")
    for k, v in res.hypotheses.items():
        lines.append(f"  hypothesis {k}: {v}")
    lines += [f"  note: {n}" for n in res.notes]
    lines += [f"  counterexample: {c}" for c in res.counterexamples]
    return res.status, entry.name if entry else "built-in", {"results": [d]}, lines


def cmd_corpus(args):
    args.corpus = args.builder
    entry = _load(args)
    T = entry.tier
    cat = T.ambient
    rep = validate(T)
    payload = {
        "name": entry.name,
        "ambient_objects": len(cat.objects),
        "core_objects": [cat.show_object(a) for a in T.core],
        "core_morphisms": len(T.core_morphisms()),
        "valid": rep.valid,
        "pullback_closed": T.pullback_closed_for_core,
        "pushout_closed": T.pushout_closed_for_core,
        "localization": entry.localization is not None,
        "params": dict(entry.params),
    }
    lines = [
        f"{entry.name}: {payload['ambient_objects']} ambient objects, "
        f"{len(T.core)} core objects, {payload['core_morphisms']} core morphisms",
        f"  valid: {rep.valid}",
        f"  pullback-closed: {payload['pullback_closed']}",
        f"  pushout-closed: {payload['pushout_closed']}",
        f"  localization: {payload['localization']}",
        f"  core: {', '.join(payload['core_objects'])}",
    ]
    return (PASS if rep.valid else FAIL), entry.name, payload, lines


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--corpus", help="corpus entry name[:params] or a .fincat file")
    common.add_argument("--json", metavar="PATH", help="write the structured report here")
    common.add_argument("--core", type=int, help="override the core size n")
    common.add_argument("--ambient", type=int, help="override the ambient size N")
    common.add_argument("--span-cap", type=int, dest="span_cap",
                        help="raw spans allowed per Spec hom-set (default: FINKAT_SPAN_CAP or 10^6)")

    p = argparse.ArgumentParser(prog="finkat", description="Finite-category computation engine")
    p.add_argument("--version", action="version", version=f"finkat {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("analyze", parents=[common], help="morphism classification table")
    c = sub.add_parser("check", parents=[common], help="evaluate a condition")
    c.add_argument("condition", help=", ".join(t.value for t in Condition))
    c.add_argument("--side", choices=("C", "X"), default="C")
    sub.add_parser("spec", parents=[common], help="build the spectral category")
    v = sub.add_parser("verify", parents=[common], help="verify a theorem")
    v.add_argument("theorem", help=", ".join(THEOREMS))
    k = sub.add_parser("corpus", parents=[common], help="describe a corpus entry")
    k.add_argument("builder", help=", ".join(CORPUS_NAMES))
    return p


COMMANDS = {
    "analyze": cmd_analyze,
    "check": cmd_check,
    "spec": cmd_spec,
    "verify": cmd_verify,
    "corpus": cmd_corpus,
}


def run(argv: Optional[list] = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    if args.command in ("analyze", "check", "spec") and args.corpus is None:
        args.corpus = "semilattice:B2"
    start = time.perf_counter()
    try:
        status, name, payload, lines = COMMANDS[args.command](args)
    except (InputError, CategoryError) as exc:
        print(f"finkat: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    elapsed = time.perf_counter() - start
    report = {
        "engine": "finkat",
        "version": __version__,
        "command": args.command,
        "corpus": name,
        "status": status,
        "elapsed_seconds": round(elapsed, 6),
        "payload": payload,
    }
    for line in lines:
        print(line, file=out)
    print(f"({elapsed:.3f}s)", file=out)
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return EXIT_FAIL if status == FAIL else EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
