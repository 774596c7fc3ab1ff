"""Reading and writing categories, functors, Σ-sets and presheaves.

Text format (line oriented, ``#`` starts a comment)::

    CATEGORY Delta1
    OBJECTS 0 1
    MORPHISMS
      u: 0 -> 1
    COMPOSE
      # g f = h  means  g∘f = h; identity composites are implicit
    SIGMA u
    END

    FUNCTOR F: dDelta1 -> Delta1
    OBJECTS
      0 -> 0
      1 -> 1
    MORPHISMS
    END

    PRESHEAF X ON Delta1
    VALUES
      0: a b
      1: c
    ACTIONS
      u: c -> a
    END

Identities ``id_<object>`` are implicit in files and explicit in memory.
A CATEGORY block may carry ``CLASSES OF <name>`` listing, for each
morphism of a localization, its representative fraction ``q = s f``.
Names are whitespace-free tokens without ``:`` or ``#``.  The JSON mirror
holds the same data under ``categories``, ``functors`` and ``presheaves``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .core import FinCat, Functor, StructureError, validate_category, validate_functor
from .fractions import LocalizationResult, SigmaSet
from .presheaf import Presheaf, validate_presheaf

__all__ = [
    "ParseError",
    "SemanticError",
    "Bundle",
    "parse",
    "parse_text",
    "parse_json",
    "load",
    "dump_category",
    "dump_functor",
    "dump_presheaf",
    "dump_localization",
    "localization_classes",
    "dump_bundle",
    "bundle_to_json",
]


class ParseError(ValueError):
    """Syntax error; carries 1-based ``line`` and ``column``."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line, self.column, self.message = line, column, message
        super().__init__(f"{line}:{column}: {message}" if line else message)


class SemanticError(ValueError):
    """Well-formed input describing something that breaks a law."""


@dataclass
class Bundle:
    categories: dict[str, FinCat] = field(default_factory=dict)
    functors: dict[str, Functor] = field(default_factory=dict)
    sigmas: dict[str, SigmaSet] = field(default_factory=dict)
    presheaves: dict[str, Presheaf] = field(default_factory=dict)
    classes: dict[str, dict] = field(default_factory=dict)  # {"of": name, "table": {q: (s, f)}}
    order: list[tuple[str, str]] = field(default_factory=list)

    def category(self, name: str | None = None) -> FinCat:
        return self._pick(self.categories, name, "category")

    def functor(self, name: str | None = None) -> Functor:
        return self._pick(self.functors, name, "functor")

    def presheaf(self, name: str | None = None) -> Presheaf:
        return self._pick(self.presheaves, name, "presheaf")

    @staticmethod
    def _pick(table, name, kind):
        if name is not None:
            if name not in table:
                raise SemanticError(f"no {kind} named {name!r}")
            return table[name]
        if not table:
            raise SemanticError(f"input has no {kind}")
        return next(reversed(table.values()))


# -- tokenizing -------------------------------------------------------------

_FORBIDDEN = set(":#") | {" ", "\t"}


def _check_name(name: str) -> str:
    if not name or any(ch in _FORBIDDEN for ch in name) or name in ("->", "="):
        raise StructureError(f"name {name!r} cannot be written to a file")
    return name


class _Line:
    def __init__(self, number: int, text: str):
        self.number = number
        body = text.split("#", 1)[0]
        self.tokens: list[tuple[str, int]] = []
        col = 0
        for part in body.split():
            col = body.index(part, col)
            self.tokens.append((part, col + 1))
            col += len(part)

    def error(self, msg: str, at: int = 0) -> ParseError:
        col = self.tokens[at][1] if at < len(self.tokens) else 1
        return ParseError(msg, self.number, col)

    @property
    def words(self) -> list[str]:
        return [t for t, _ in self.tokens]


def _split_colon(line: _Line) -> tuple[str, list[str]]:
    """``name: rest`` (the colon may be attached or separate)."""
    words = line.words
    head = words[0]
    if head.endswith(":") and len(head) > 1:
        return head[:-1], words[1:]
    if len(words) > 1 and words[1] == ":":
        return head, words[2:]
    if len(words) > 1 and words[1].startswith(":"):
        return head, [words[1][1:]] + words[2:] if words[1][1:] else words[2:]
    raise line.error("expected 'name: ...'")


def _arrows(line: _Line, words: list[str], offset: int) -> list[tuple[str, str]]:
    if len(words) % 3:
        raise line.error("expected pairs 'x -> y'", offset)
    out = []
    for i in range(0, len(words), 3):
        if words[i + 1] != "->":
            raise line.error("expected '->'", offset + i + 1)
        out.append((words[i], words[i + 2]))
    return out


# -- parsing ------------------------------------------------------------------


def parse_text(text: str, *, validate: bool = True) -> Bundle:
    lines = [_Line(i + 1, t) for i, t in enumerate(text.splitlines())]
    lines = [ln for ln in lines if ln.tokens]
    bundle = Bundle()
    i = 0
    while i < len(lines):
        ln = lines[i]
        kw = ln.words[0]
        j = i + 1
        while j < len(lines) and lines[j].words[0] != "END":
            if lines[j].words[0] in ("CATEGORY", "FUNCTOR", "PRESHEAF"):
                raise lines[j].error(f"{kw} block is not closed by END")
            j += 1
        if j == len(lines):
            raise ln.error(f"{kw} block is not closed by END")
        body = lines[i + 1 : j]
        if kw == "CATEGORY":
            _category_block(bundle, ln, body, validate)
        elif kw == "FUNCTOR":
            _functor_block(bundle, ln, body, validate)
        elif kw == "PRESHEAF":
            _presheaf_block(bundle, ln, body, validate)
        else:
            raise ln.error(f"unknown block {kw!r}")
        i = j + 1
    return bundle


def _sections(body: list[_Line], allowed: tuple[str, ...]) -> dict[str, tuple[_Line, list[_Line]]]:
    out: dict[str, tuple[_Line, list[_Line]]] = {}
    current = None
    for ln in body:
        w = ln.words[0]
        if w in allowed:
            if w in out:
                raise ln.error(f"section {w} given twice")
            current = w
            out[w] = (ln, [])
        elif current is None:
            raise ln.error(f"expected one of {', '.join(allowed)}")
        else:
            out[current][1].append(ln)
    return out


def _category_block(bundle: Bundle, head: _Line, body: list[_Line], validate: bool) -> None:
    if len(head.tokens) != 2:
        raise head.error("expected 'CATEGORY <name>'")
    name = head.words[1]
    secs = _sections(body, ("OBJECTS", "MORPHISMS", "COMPOSE", "SIGMA", "CLASSES"))
    if "OBJECTS" not in secs:
        raise head.error("category has no OBJECTS section")
    oh, ob = secs["OBJECTS"]
    objects = oh.words[1:] + [w for ln in ob for w in ln.words]
    obj_set = set()
    for o in objects:
        if o in obj_set:
            raise oh.error(f"object {o!r} declared twice")
        obj_set.add(o)
    arrows = []
    mh, mb = secs.get("MORPHISMS", (None, []))
    if mh is not None and len(mh.tokens) > 1:
        raise mh.error("MORPHISMS takes no arguments", 1)
    known = {f"id_{o}" for o in objects}
    for ln in mb:
        nm, rest = _split_colon(ln)
        if len(rest) != 3 or rest[1] != "->":
            raise ln.error("expected 'name: src -> tgt'")
        for k, o in ((0, rest[0]), (2, rest[2])):
            if o not in obj_set:
                raise ln.error(f"unknown object {o!r}", len(ln.tokens) - 3 + k)
        if nm in known:
            raise ln.error(f"morphism {nm!r} declared twice")
        known.add(nm)
        arrows.append((nm, rest[0], rest[2]))
    compose = {}
    for ln in secs.get("COMPOSE", (None, []))[1]:
        w = ln.words
        if len(w) != 4 or w[2] != "=":
            raise ln.error("expected 'g f = h'")
        for k in (0, 1, 3):
            if w[k] not in known:
                raise ln.error(f"unknown morphism {w[k]!r}", k)
        if (w[0], w[1]) in compose:
            raise ln.error(f"composite {w[0]} {w[1]} given twice")
        compose[w[0], w[1]] = w[3]
    try:
        c = FinCat.build(objects, arrows, compose, name=name)
    except StructureError as e:
        raise SemanticError(f"category {name}: {e}") from None
    if validate:
        v = validate_category(c)
        if not v.holds:
            raise SemanticError(f"category {name}: {_law(c, v.counterexample)}")
    _register(bundle, "category", name, head)
    bundle.categories[name] = c
    if "SIGMA" in secs:
        sh, sb = secs["SIGMA"]
        names = sh.words[1:] + [w for ln in sb for w in ln.words]
        for n in names:
            if n not in known:
                raise sh.error(f"unknown morphism {n!r} in SIGMA")
        bundle.sigmas[name] = SigmaSet.from_names(c, names)
    if "CLASSES" in secs:
        ch, cb = secs["CLASSES"]
        if len(ch.tokens) != 3 or ch.words[1] != "OF":
            raise ch.error("expected 'CLASSES OF <category>'")
        table = {}
        for ln in cb:
            w = ln.words
            if len(w) != 4 or w[1] != "=":
                raise ln.error("expected 'q = s f'")
            if w[0] not in known:
                raise ln.error(f"unknown morphism {w[0]!r}")
            table[w[0]] = (w[2], w[3])
        bundle.classes[name] = {"of": ch.words[2], "table": table}


def _law(c: FinCat, ce) -> str:
    label, data = ce
    if label in ("identity-endpoints",):
        return f"{label} at {c.obj_names[data[0]]}"
    names = [c.mor_names[k] for k in data]
    if label == "compose-undefined":
        return f"composition undefined for {names[0]} after {names[1]} (missing COMPOSE entry)"
    return f"{label} fails at ({', '.join(names)})"


def _register(bundle: Bundle, kind: str, name: str, head: _Line) -> None:
    if (kind, name) in bundle.order:
        raise head.error(f"{kind} {name!r} defined twice")
    bundle.order.append((kind, name))


def _functor_block(bundle: Bundle, head: _Line, body: list[_Line], validate: bool) -> None:
    w = head.words
    # FUNCTOR F: C -> D   (colon attached or separate)
    rest = w[1:]
    if rest and rest[0].endswith(":") and len(rest[0]) > 1:
        rest = [rest[0][:-1], ":"] + rest[1:]
    if len(rest) != 5 or rest[1] != ":" or rest[3] != "->":
        raise head.error("expected 'FUNCTOR <name>: <domain> -> <codomain>'")
    name, dname, cname = rest[0], rest[2], rest[4]
    for k, cn in ((len(w) - 3, dname), (len(w) - 1, cname)):
        if cn not in bundle.categories:
            raise head.error(f"unknown category {cn!r}", k)
    C, D = bundle.categories[dname], bundle.categories[cname]
    secs = _sections(body, ("OBJECTS", "MORPHISMS"))
    objmap, mormap = {}, {}
    for key, table, src, tgt in (
        ("OBJECTS", objmap, C.obj_names, D.obj_names),
        ("MORPHISMS", mormap, C.mor_names, D.mor_names),
    ):
        sh, sb = secs.get(key, (None, []))
        for ln in sb:
            for a, b in _arrows(ln, ln.words, 0):
                if a not in src:
                    raise ln.error(f"unknown {key[:-1].lower()} {a!r} of {dname}")
                if b not in tgt:
                    raise ln.error(f"unknown {key[:-1].lower()} {b!r} of {cname}", 2)
                if a in table:
                    raise ln.error(f"{a!r} mapped twice")
                table[a] = b
    try:
        F = Functor.from_names(C, D, objmap, mormap, name=name)
    except (StructureError, KeyError) as e:
        raise SemanticError(f"functor {name}: {e}") from None
    if validate:
        v = validate_functor(F)
        if not v.holds:
            label, data = v.counterexample
            what = {"endpoints": C.mor_names, "identity": C.obj_names}.get(label)
            where = ", ".join(what[k] for k in data) if what else ", ".join(C.mor_names[k] for k in data)
            raise SemanticError(f"functor {name}: does not preserve {label} at {where}")
    _register(bundle, "functor", name, head)
    bundle.functors[name] = F


def _presheaf_block(bundle: Bundle, head: _Line, body: list[_Line], validate: bool) -> None:
    w = head.words
    if len(w) != 4 or w[2] != "ON":
        raise head.error("expected 'PRESHEAF <name> ON <category>'")
    name, cname = w[1], w[3]
    if cname not in bundle.categories:
        raise head.error(f"unknown category {cname!r}", 3)
    c = bundle.categories[cname]
    secs = _sections(body, ("VALUES", "ACTIONS"))
    values: dict[int, list[str]] = {}
    for ln in secs.get("VALUES", (None, []))[1]:
        o, elems = _split_colon(ln)
        if o not in c.obj_names:
            raise ln.error(f"unknown object {o!r}")
        if len(set(elems)) != len(elems):
            raise ln.error(f"repeated element at {o}")
        values[c.obj(o)] = elems
    for x in c.objects:
        values.setdefault(x, [])
    sizes = [len(values[x]) for x in c.objects]
    pos = {x: {e: i for i, e in enumerate(values[x])} for x in c.objects}
    action = {}
    for ln in secs.get("ACTIONS", (None, []))[1]:
        m, rest = _split_colon(ln)
        if m not in c.mor_names:
            raise ln.error(f"unknown morphism {m!r}")
        k = c.mor(m)
        s, t = c.src[k], c.tgt[k]
        fn: list[int | None] = [None] * sizes[t]
        for a, b in _arrows(ln, rest, 1):
            if a not in pos[t]:
                raise ln.error(f"{a!r} is not an element at {c.obj_names[t]}")
            if b not in pos[s]:
                raise ln.error(f"{b!r} is not an element at {c.obj_names[s]}")
            fn[pos[t][a]] = pos[s][b]
        if None in fn:
            missing = values[t][fn.index(None)]
            raise SemanticError(f"presheaf {name}: action of {m} is not defined on {missing}")
        action[k] = fn
    try:
        x = Presheaf.from_functions(c, sizes, action, labels=tuple(tuple(values[o]) for o in c.objects))
    except StructureError as e:
        raise SemanticError(f"presheaf {name}: {e}") from None
    if validate:
        v = validate_presheaf(x)
        if not v.holds:
            label, data = v.counterexample
            raise SemanticError(f"presheaf {name}: {label} law fails at {data}")
    _register(bundle, "presheaf", name, head)
    bundle.presheaves[name] = x


def parse_json(text: str, *, validate: bool = True) -> Bundle:
    """The JSON mirror, translated to the text format and parsed by the same rules."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, e.lineno, e.colno) from None
    return parse_text(_json_to_text(doc), validate=validate)


def _json_to_text(doc: dict) -> str:
    out = []
    for c in doc.get("categories", []):
        out.append(f"CATEGORY {c['name']}")
        out.append("OBJECTS " + " ".join(c["objects"]))
        out.append("MORPHISMS")
        out += [f"  {m['name']}: {m['src']} -> {m['tgt']}" for m in c.get("morphisms", [])]
        out.append("COMPOSE")
        out += [f"  {g} {f} = {h}" for g, f, h in c.get("compose", [])]
        if c.get("sigma") is not None:
            out.append("SIGMA " + " ".join(c["sigma"]))
        if c.get("classes"):
            out.append(f"CLASSES OF {c['classes']['of']}")
            out += [f"  {q} = {s} {f}" for q, (s, f) in c["classes"]["table"].items()]
        out.append("END")
    for f in doc.get("functors", []):
        out.append(f"FUNCTOR {f['name']}: {f['domain']} -> {f['codomain']}")
        out.append("OBJECTS")
        out += [f"  {a} -> {b}" for a, b in f.get("objects", {}).items()]
        out.append("MORPHISMS")
        out += [f"  {a} -> {b}" for a, b in f.get("morphisms", {}).items()]
        out.append("END")
    for p in doc.get("presheaves", []):
        out.append(f"PRESHEAF {p['name']} ON {p['base']}")
        out.append("VALUES")
        out += [f"  {o}: {' '.join(es)}" for o, es in p.get("values", {}).items()]
        out.append("ACTIONS")
        out += [
            f"  {m}:" + "".join(f" {a} -> {b}" for a, b in fn.items())
            for m, fn in p.get("actions", {}).items()
        ]
        out.append("END")
    return "\n".join(out) + "\n"


def parse(path: str | Path, *, validate: bool = True) -> Bundle:
    """Parse a ``.json`` file as the JSON mirror and anything else as text."""
    p = Path(path)
    text = p.read_text(encoding="utf-8")
    if p.suffix == ".json":
        return parse_json(text, validate=validate)
    return parse_text(text, validate=validate)


load = parse


# -- writing ------------------------------------------------------------------


def _implicit(c: FinCat) -> bool:
    return all(c.mor_names[c.identity(x)] == f"id_{c.obj_names[x]}" for x in c.objects)


def _category_data(c: FinCat) -> dict:
    if not _implicit(c):
        raise StructureError(f"{c.name}: identities must be named id_<object> to be written")
    for n in c.obj_names + c.mor_names + (c.name,):
        _check_name(n)
    morphisms = [
        {"name": c.mor_names[k], "src": c.obj_names[c.src[k]], "tgt": c.obj_names[c.tgt[k]]}
        for k in c.morphisms
        if not c.is_identity(k)
    ]
    compose = [
        [c.mor_names[g], c.mor_names[f], c.mor_names[c.compose(g, f)]]
        for g, f in c.composable_pairs()
        if not (c.is_identity(g) or c.is_identity(f))
    ]
    return {"name": c.name, "objects": list(c.obj_names), "morphisms": morphisms, "compose": compose}


def dump_category(c: FinCat, sigma: SigmaSet | None = None, classes: dict | None = None) -> str:
    d = _category_data(c)
    out = [f"CATEGORY {d['name']}", "OBJECTS " + " ".join(d["objects"]), "MORPHISMS"]
    out += [f"  {m['name']}: {m['src']} -> {m['tgt']}" for m in d["morphisms"]]
    out.append("COMPOSE")
    out += [f"  {g} {f} = {h}" for g, f, h in d["compose"]]
    if sigma is not None:
        out.append("SIGMA " + " ".join(c.mor_names[k] for k in sorted(sigma.members) if not c.is_identity(k)))
    if classes is not None:
        out.append(f"CLASSES OF {_check_name(classes['of'])}")
        out += [f"  {q} = {s} {f}" for q, (s, f) in classes["table"].items()]
    out.append("END")
    return "\n".join(out) + "\n"


def _functor_data(F: Functor) -> dict:
    C, D = F.domain, F.codomain
    _check_name(F.name)
    return {
        "name": F.name,
        "domain": C.name,
        "codomain": D.name,
        "objects": {C.obj_names[x]: D.obj_names[F.obj(x)] for x in C.objects},
        "morphisms": {C.mor_names[k]: D.mor_names[F(k)] for k in C.morphisms if not C.is_identity(k)},
    }


def dump_functor(F: Functor) -> str:
    d = _functor_data(F)
    out = [f"FUNCTOR {d['name']}: {d['domain']} -> {d['codomain']}", "OBJECTS"]
    out += [f"  {a} -> {b}" for a, b in d["objects"].items()]
    out.append("MORPHISMS")
    out += [f"  {a} -> {b}" for a, b in d["morphisms"].items()]
    out.append("END")
    return "\n".join(out) + "\n"


def _presheaf_data(x: Presheaf, name: str) -> dict:
    c = x.base
    _check_name(name)
    names = [x.element_names(o) for o in c.objects]
    for es in names:
        for e in es:
            _check_name(e)
    actions = {}
    for k in c.morphisms:
        if c.is_identity(k):
            continue
        s, t = c.src[k], c.tgt[k]
        actions[c.mor_names[k]] = {names[t][v]: names[s][x.action[k][v]] for v in range(x.sizes[t])}
    return {
        "name": name,
        "base": c.name,
        "values": {c.obj_names[o]: list(names[o]) for o in c.objects},
        "actions": actions,
    }


def dump_presheaf(x: Presheaf, name: str = "X") -> str:
    d = _presheaf_data(x, name)
    out = [f"PRESHEAF {name} ON {d['base']}", "VALUES"]
    out += [f"  {o}:" + "".join(f" {e}" for e in es) for o, es in d["values"].items()]
    out.append("ACTIONS")
    out += [
        f"  {m}:" + "".join(f" {a} -> {b}" for a, b in fn.items()) for m, fn in d["actions"].items()
    ]
    out.append("END")
    return "\n".join(out) + "\n"


def localization_classes(loc: LocalizationResult, c: FinCat) -> dict:
    """``{"of": name, "table": {quotient morphism: (s, f)}}`` for non-identity classes."""
    q = loc.quotient
    table = {}
    for k in q.morphisms:
        if q.is_identity(k):
            continue
        s, f = loc.reps[k]
        table[q.mor_names[k]] = (c.mor_names[s], c.mor_names[f])
    return {"of": c.name, "table": table}


def dump_localization(loc: LocalizationResult, c: FinCat) -> str:
    return dump_category(loc.quotient, classes=localization_classes(loc, c))


def dump_bundle(b: Bundle) -> str:
    parts = []
    for kind, name in b.order:
        if kind == "category":
            parts.append(dump_category(b.categories[name], b.sigmas.get(name), b.classes.get(name)))
        elif kind == "functor":
            parts.append(dump_functor(b.functors[name]))
        else:
            parts.append(dump_presheaf(b.presheaves[name], name))
    return "\n".join(parts)


def bundle_to_json(b: Bundle) -> str:
    doc: dict = {"categories": [], "functors": [], "presheaves": []}
    for kind, name in b.order:
        if kind == "category":
            d = _category_data(b.categories[name])
            if name in b.sigmas:
                c = b.categories[name]
                d["sigma"] = [c.mor_names[k] for k in sorted(b.sigmas[name].members) if not c.is_identity(k)]
            if name in b.classes:
                cl = b.classes[name]
                d["classes"] = {"of": cl["of"], "table": {k: list(v) for k, v in cl["table"].items()}}
            doc["categories"].append(d)
        elif kind == "functor":
            doc["functors"].append(_functor_data(b.functors[name]))
        else:
            doc["presheaves"].append(_presheaf_data(b.presheaves[name], name))
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
