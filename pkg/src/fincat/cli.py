"""``fincat`` command line.

Exit codes: 0 the property holds or the output was written, 1 the property
fails (a report is still printed), 2 input errors or unmet hypotheses.
"""
from __future__ import annotations

import argparse
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import io
from .core import StructureError, validate_category, validate_functor
from .decision import (
    HYPOTHESES_NOT_MET,
    PRESENTATION,
    HypothesesNotMet,
    check_presentation,
    check_universal_equivalence,
    cross_validate,
)
from .fractions import LocalizationError, check_left_fractions, check_right_fractions, localize, localize_left
from .limits import binary_product, equalizer, has_finite_limits, preserves_finite_limits, terminal_objects
from .presheaf import left_kan, validate_presheaf

OK, FAILS, INPUT = 0, 1, 2


class _Usage(Exception):
    pass


def _load(args) -> io.Bundle:
    return io.parse(args.file)


def _emit(text: str, args) -> None:
    out = getattr(args, "output", None)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _stamp(text: str, args) -> str:
    if getattr(args, "timestamps", False) and getattr(args, "format", "text") == "text":
        return f"generated: {datetime.now(timezone.utc).isoformat(timespec='seconds')}\n" + text
    return text


def _verdict_text(label: str, v, names=None) -> str:
    if v.holds:
        return f"{label}: holds\n"
    cl, data = v.counterexample
    shown = [names(i, x) for i, x in enumerate(data)] if names else [str(x) for x in data]
    return f"{label}: fails {cl}({', '.join(shown)})\n"


# -- subcommands ---------------------------------------------------------------


def cmd_validate(args) -> int:
    bundle = io.parse(args.file, validate=False)
    lines, ok = [], True
    for kind, name in bundle.order:
        if kind == "category":
            v = validate_category(bundle.categories[name])
        elif kind == "functor":
            v = validate_functor(bundle.functors[name])
        else:
            v = validate_presheaf(bundle.presheaves[name])
        ok &= v.holds
        lines.append(_verdict_text(f"{kind} {name}", v))
    _emit("".join(lines), args)
    return OK if ok else FAILS


def cmd_limits(args) -> int:
    bundle = _load(args)
    c = bundle.category(args.category)
    v = has_finite_limits(c)
    obj, mor = c.obj_names, c.mor_names
    lines = [f"category: {c.name}"]
    lines.append("terminal: " + (" ".join(obj[t] for t in terminal_objects(c)) or "none"))
    for a in c.objects:
        for b in c.objects:
            if a <= b:
                p = binary_product(c, a, b)
                shown = "none" if p is None else f"{obj[p.apex]} via {', '.join(mor[k] for k in p.legs)}"
                lines.append(f"product {obj[a]} x {obj[b]}: {shown}")
    for a in c.objects:
        for b in c.objects:
            hs = c.hom(a, b)
            for i, f in enumerate(hs):
                for g in hs[i + 1 :]:
                    e = equalizer(c, f, g)
                    shown = "none" if e is None else f"{obj[e.apex]} via {mor[e.legs[0]]}"
                    lines.append(f"equalizer {mor[f]}, {mor[g]}: {shown}")
    kinds = {"no-product": obj, "no-equalizer": mor}
    names = (lambda i, x: kinds[v.counterexample[0]][x]) if not v.holds and v.counterexample[0] in kinds else None
    lines.append(_verdict_text("finite-limits", v, names).rstrip("\n"))
    code = OK if v.holds else FAILS
    if args.functor:
        F = bundle.functor(args.functor)
        if F.domain != c:
            raise _Usage(f"functor {F.name} does not start at {c.name}")
        if v.holds:
            pv = preserves_finite_limits(F)
            lines.append(_verdict_text(f"preserves ({F.name})", pv).rstrip("\n"))
            code = OK if pv.holds else FAILS
        else:
            lines.append(f"preserves ({F.name}): not-checked")
    _emit("\n".join(lines) + "\n", args)
    return code


def _sigma(bundle: io.Bundle, args):
    if args.category is None and bundle.sigmas:
        c = bundle.categories[next(iter(bundle.sigmas))]
    else:
        c = bundle.category(args.category)
    if c.name not in bundle.sigmas:
        raise _Usage(f"category {c.name} has no SIGMA section")
    return c, bundle.sigmas[c.name]


def cmd_check_fractions(args) -> int:
    bundle = _load(args)
    c, sigma = _sigma(bundle, args)
    v = (check_left_fractions if args.left else check_right_fractions)(c, sigma)
    side = "left" if args.left else "right"
    lines = [f"category: {c.name}", f"sigma: {' '.join(c.mor_names[k] for k in sorted(sigma.members))}"]
    for axiom, pv in v.parts.items():
        names = None
        if not pv.holds:
            names = (lambda i, x: c.obj_names[x]) if pv.counterexample[0] == "RF1-identity" else (lambda i, x: c.mor_names[x])
        lines.append(_verdict_text(f"{side} {axiom}", pv, names).rstrip("\n"))
    _emit("\n".join(lines) + "\n", args)
    return OK if v.holds else FAILS


def cmd_localize(args) -> int:
    bundle = _load(args)
    c, sigma = _sigma(bundle, args)
    try:
        loc = (localize_left if args.left else localize)(c, sigma, name=args.name)
    except LocalizationError as e:
        sys.stderr.write(f"fincat: {e}\n")
        return FAILS
    _emit(io.dump_localization(loc, c), args)
    return OK


def cmd_kan(args) -> int:
    bundle = _load(args)
    F = bundle.functor(args.functor)
    x = bundle.presheaf(args.presheaf)
    name = next(n for n, p in bundle.presheaves.items() if p is x)
    ext = left_kan(F, x)
    _emit(io.dump_presheaf(ext, f"{F.name}_*{name}"), args)
    return OK


def _presentation(args, oracle: bool) -> int:
    bundle = _load(args)
    F = bundle.functor(args.functor)
    report = check_presentation(F, oracle=oracle, seed=args.seed, samples=args.samples)
    if oracle and report.conclusion == PRESENTATION:
        v = cross_validate(F, report, seed=args.seed, samples=args.samples)
        report.extra["cross-validation"] = v
    text = report.to_json() if args.format == "json" else report.to_text()
    _emit(_stamp(text, args), args)
    if report.conclusion == PRESENTATION:
        return OK if all(v.holds for v in report.extra.values()) else FAILS
    return INPUT if report.conclusion == HYPOTHESES_NOT_MET else FAILS


def cmd_check_presentation(args) -> int:
    return _presentation(args, args.oracle)


def cmd_report(args) -> int:
    return _presentation(args, True)


def cmd_check_equivalence(args) -> int:
    bundle = _load(args)
    F = bundle.functor(args.functor)
    try:
        v = check_universal_equivalence(F)
    except HypothesesNotMet as e:
        sys.stderr.write(f"fincat: {e}\n")
        return INPUT
    C, B = F.domain, F.codomain
    lines = [f"functor: {F.name}: {C.name} -> {B.name}"]
    kinds = {"not-full": (C.obj_names, C.obj_names, B.mor_names), "not-faithful": (C.obj_names, C.obj_names, C.mor_names, C.mor_names), "no-isomorph": (B.obj_names,), "hom-not-bijective": (C.obj_names, C.obj_names)}
    for part, pv in v.parts.items():
        names = None
        if not pv.holds and pv.counterexample[0] in kinds:
            tabs = kinds[pv.counterexample[0]]
            names = lambda i, x, tabs=tabs: tabs[i][x]
        lines.append(_verdict_text(part, pv, names).rstrip("\n"))
    lines.append(f"universal-equivalence: {'holds' if v.holds else 'fails'}")
    _emit("\n".join(lines) + "\n", args)
    return OK if v.holds else FAILS


# -- wiring ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fincat", description="Checks on finite categories and functors.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("file", help="category file (.cat text or .json)")
        sp.add_argument("-o", "--output", help="write to this file instead of stdout")
        sp.set_defaults(func=func)
        return sp

    add("validate", cmd_validate, "check category, functor and presheaf laws")
    sp = add("limits", cmd_limits, "terminal objects, products, equalizers")
    sp.add_argument("--category")
    sp.add_argument("--functor", help="also check that this functor preserves finite limits")
    for name, func, help_text in (
        ("check-fractions", cmd_check_fractions, "calculus of fractions for the SIGMA set"),
        ("localize", cmd_localize, "write the category of fractions"),
    ):
        sp = add(name, func, help_text)
        sp.add_argument("--category")
        sp.add_argument("--left", action="store_true", help="left fractions instead of right")
        if name == "localize":
            sp.add_argument("--name", help="name of the quotient category")
    sp = add("kan", cmd_kan, "left Kan extension of a presheaf")
    sp.add_argument("--functor")
    sp.add_argument("--presheaf")
    for name, func, help_text in (
        ("check-presentation", cmd_check_presentation, "decide the presentation criterion"),
        ("report", cmd_report, "criterion plus presheaf oracle cross-checks"),
    ):
        sp = add(name, func, help_text)
        sp.add_argument("--functor")
        sp.add_argument("--format", choices=("text", "json"), default="text")
        sp.add_argument("--seed", type=int, default=0, help="seed for sampled size-3 probes")
        sp.add_argument("--samples", type=int, default=20, help="number of sampled size-3 probes")
        sp.add_argument("--timestamps", action="store_true", help="prefix text output with the time")
        if name == "check-presentation":
            sp.add_argument("--oracle", action="store_true", help="run the presheaf oracle")
    sp = add("check-equivalence", cmd_check_equivalence, "universal equivalence (equivalence of categories)")
    sp.add_argument("--functor")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as e:
        sys.stderr.write(f"fincat: {e}\n")
    except io.ParseError as e:
        sys.stderr.write(f"fincat: {args.file}:{e}\n")
    except (io.SemanticError, StructureError, _Usage) as e:
        sys.stderr.write(f"fincat: {e}\n")
    return INPUT


if __name__ == "__main__":
    raise SystemExit(main())
