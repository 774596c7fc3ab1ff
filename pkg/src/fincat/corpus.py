"""Named small categories and a generated corpus of finite-limit categories.

A finite category with binary products is a preorder: ``|hom(y, x^n)|`` equals
``|hom(y, x)|^n`` and must stay bounded.  So the finite-limit part of the
corpus consists of meet-semilattices with top, the regular-action categories
of cyclic groups (codiscrete groupoids), and their products.  The named
examples (boundary of Δ[1], the walking idempotent, ...) sit outside that
class on purpose.
"""
from __future__ import annotations

import random
from functools import lru_cache
from itertools import combinations, product
from typing import Iterable, Sequence

from .core import FinCat, Functor, assemble, identity_functor

__all__ = [
    "terminal",
    "point",
    "boundary",
    "arrow",
    "walking_iso",
    "walking_idempotent",
    "split_idempotent",
    "idempotent_inclusion",
    "constant_maps_monoid",
    "cyclic_group",
    "preorder",
    "chain",
    "lattice_of_sets",
    "boolean_lattice",
    "action_category",
    "product_category",
    "projection",
    "to_terminal",
    "finite_limit_categories",
    "corpus_functors",
    "named_categories",
]


def terminal(name: str = "1") -> FinCat:
    return FinCat.build(["*"], name=name)


def point() -> FinCat:
    """Δ[0]."""
    return FinCat.build(["*"], name="Delta0")


def boundary() -> FinCat:
    """∂Δ[1]: two objects, identities only."""
    return FinCat.build(["0", "1"], name="dDelta1")


def arrow() -> FinCat:
    """Δ[1]: ``u: 0 -> 1``."""
    return FinCat.build(["0", "1"], [("u", "0", "1")], name="Delta1")


def walking_iso() -> FinCat:
    return FinCat.build(
        ["0", "1"],
        [("i", "0", "1"), ("j", "1", "0")],
        {("j", "i"): "id_0", ("i", "j"): "id_1"},
        name="Iso",
    )


def walking_idempotent() -> FinCat:
    """E: one object with ``e∘e = e``."""
    return FinCat.build(["*"], [("e", "*", "*")], {("e", "e"): "e"}, name="E")


def split_idempotent() -> FinCat:
    """Split(E): ``e = a∘b`` on ``*`` with retract ``r`` and ``b∘a = id_r``."""
    return FinCat.build(
        ["*", "r"],
        [("e", "*", "*"), ("b", "*", "r"), ("a", "r", "*")],
        {
            ("e", "e"): "e",
            ("b", "e"): "b",
            ("e", "a"): "a",
            ("a", "b"): "e",
            ("b", "a"): "id_r",
        },
        name="SplitE",
    )


def idempotent_inclusion() -> Functor:
    """The Cauchy completion E -> Split(E)."""
    E, S = walking_idempotent(), split_idempotent()
    return Functor.from_names(E, S, {"*": "*"}, {"e": "e"}, name="J")


def constant_maps_monoid() -> FinCat:
    """Identity and the two constant self-maps of a 2-element set: ``c_i∘x = c_i``."""
    return FinCat.build(
        ["*"],
        [("c0", "*", "*"), ("c1", "*", "*")],
        {("c0", "c0"): "c0", ("c0", "c1"): "c0", ("c1", "c0"): "c1", ("c1", "c1"): "c1"},
        name="Const2",
    )


def cyclic_group(n: int) -> FinCat:
    """Z/n as a one-object category."""
    names = ["id_*"] + [f"g{k}" for k in range(1, n)]

    def comp(g, f):
        return (g + f) % n

    return assemble(["*"], [(nm, 0, 0) for nm in names], [0], comp, name=f"Z{n}")


def preorder(objects: Sequence[str], leq, name: str = "P") -> FinCat:
    """Thin category with a morphism ``x -> y`` iff ``leq(x, y)``."""
    objs = list(objects)
    n = len(objs)
    arrows = [(f"id_{objs[i]}", i, i) for i in range(n)]
    for i in range(n):
        for j in range(n):
            if i != j and leq(objs[i], objs[j]):
                arrows.append((f"{objs[i]}<{objs[j]}", i, j))
    index = {(s, t): k for k, (_, s, t) in enumerate(arrows)}

    def comp(g, f):
        return index[arrows[f][1], arrows[g][2]]

    return assemble(objs, arrows, list(range(n)), comp, name=name)


def chain(n: int) -> FinCat:
    return preorder([str(i) for i in range(n)], lambda a, b: int(a) <= int(b), name=f"Chain{n}")


def _set_name(s: frozenset) -> str:
    return "s" + "".join(str(x) for x in sorted(s))


def lattice_of_sets(family: Iterable[Iterable[int]], universe: Iterable[int], name: str = "L") -> FinCat:
    """Closure of ``family ∪ {universe}`` under intersection, ordered by inclusion.

    A finite meet-semilattice with top; meets are intersections.
    """
    top = frozenset(universe)
    sets = {top} | {frozenset(s) for s in family}
    changed = True
    while changed:
        changed = False
        for a, b in combinations(list(sets), 2):
            m = a & b
            if m not in sets:
                sets.add(m)
                changed = True
    ordered = sorted(sets, key=lambda s: (len(s), sorted(s)))
    by_name = {_set_name(s): s for s in ordered}
    return preorder(list(by_name), lambda a, b: by_name[a] <= by_name[b], name=name)


def boolean_lattice(k: int) -> FinCat:
    u = range(1, k + 1)
    return lattice_of_sets([{i} for i in u] + [set(c) for r in range(k) for c in combinations(u, r)], u, name=f"Bool{k}")


def action_category(n: int) -> FinCat:
    """Translation category of Z/n acting on itself: ``g: x -> x+g``.

    Every hom-set is a singleton, so this is the codiscrete groupoid on ``n``.
    """
    objs = [f"x{i}" for i in range(n)]
    arrows = [(f"id_{objs[i]}", i, i) for i in range(n)]
    for x in range(n):
        for g in range(1, n):
            arrows.append((f"g{g}@x{x}", x, (x + g) % n))
    index = {(s, t): k for k, (_, s, t) in enumerate(arrows)}

    def comp(g, f):
        return index[arrows[f][1], arrows[g][2]]

    return assemble(objs, arrows, list(range(n)), comp, name=f"Act{n}")


def _product_parts(c: FinCat, d: FinCat):
    pairs = list(product(c.objects, d.objects))
    pidx = {p: i for i, p in enumerate(pairs)}
    mors = [(c.identity(a), d.identity(b)) for a, b in pairs]
    rest = [
        (f, g)
        for f in c.morphisms
        for g in d.morphisms
        if not (c.is_identity(f) and d.is_identity(g))
    ]
    rest.sort(key=lambda fg: (pidx[c.src[fg[0]], d.src[fg[1]]], pidx[c.tgt[fg[0]], d.tgt[fg[1]]], fg))
    return pairs, pidx, mors + rest


def product_category(c: FinCat, d: FinCat, name: str | None = None) -> FinCat:
    pairs, pidx, mors = _product_parts(c, d)
    midx = {m: i for i, m in enumerate(mors)}
    obj_names = [f"({c.obj_names[a]},{d.obj_names[b]})" for a, b in pairs]
    specs = []
    for k, (f, g) in enumerate(mors):
        s, t = pidx[c.src[f], d.src[g]], pidx[c.tgt[f], d.tgt[g]]
        nm = f"id_{obj_names[s]}" if k < len(pairs) else f"({c.mor_names[f]},{d.mor_names[g]})"
        specs.append((nm, s, t))

    def comp(x, y):
        (f1, g1), (f2, g2) = mors[x], mors[y]
        return midx[c.compose(f1, f2), d.compose(g1, g2)]

    return assemble(obj_names, specs, list(range(len(pairs))), comp, name=name or f"{c.name}x{d.name}")


def projection(c: FinCat, d: FinCat, which: int = 0) -> Functor:
    """Projection of ``product_category(c, d)`` onto factor ``which``."""
    pairs, _, mors = _product_parts(c, d)
    return Functor(
        product_category(c, d),
        (c, d)[which],
        [q[which] for q in pairs],
        [m[which] for m in mors],
        name=f"pr{which + 1}",
    )


def to_terminal(c: FinCat) -> Functor:
    one = terminal()
    return Functor(c, one, [0] * c.n_objects, [0] * c.n_morphisms, name="!")


def named_categories() -> dict[str, FinCat]:
    return {
        "terminal": terminal(),
        "boundary": boundary(),
        "arrow": arrow(),
        "walking_iso": walking_iso(),
        "walking_idempotent": walking_idempotent(),
        "split_idempotent": split_idempotent(),
    }


# -- generated corpus -----------------------------------------------------------


def _random_lattices(rng: random.Random, count: int) -> list[FinCat]:
    out, seen = [], set()
    attempts = 0
    while len(out) < count and attempts < 5000:
        attempts += 1
        k = rng.choice([2, 3, 4])
        universe = list(range(1, k + 1))
        family = [
            frozenset(x for x in universe if rng.random() < 0.5) for _ in range(rng.randint(1, 4))
        ]
        lat = lattice_of_sets(family, universe)
        key = (lat.obj_names, lat.src, lat.tgt)
        if lat.n_objects < 3 or lat.n_objects > 8 or lat.n_morphisms > 40 or key in seen:
            continue
        seen.add(key)
        out.append(lat.renamed(f"L{len(out)}"))
    return out


@lru_cache(maxsize=None)
def finite_limit_categories(seed: int = 0) -> tuple[FinCat, ...]:
    """The generated corpus: at least 50 categories, each with finite limits,
    at most 8 objects and 40 morphisms."""
    rng = random.Random(seed)
    cats: list[FinCat] = [chain(n) for n in range(1, 6)]
    cats += [boolean_lattice(2), boolean_lattice(3)]
    cats.append(lattice_of_sets([{1}, {2}, {3}], [1, 2, 3], name="M3"))
    cats.append(lattice_of_sets([{1}, {1, 2}, {3}], [1, 2, 3], name="N5"))
    cats += [action_category(n) for n in range(2, 5)]
    cats += _random_lattices(rng, 32)
    small = [chain(2), chain(3), boolean_lattice(2)]
    for a in small:
        for n in (2, 3):
            p = product_category(a, action_category(n))
            if p.n_objects <= 8 and p.n_morphisms <= 40:
                cats.append(p)
    cats.append(product_category(chain(2), chain(3)))
    cats.append(product_category(chain(2), chain(4)))
    cats.append(product_category(chain(2), boolean_lattice(2)))
    return tuple(cats)


def _thin(c: FinCat) -> bool:
    return all(len(c.hom(a, b)) <= 1 for a in c.objects for b in c.objects)


def _is_poset(c: FinCat) -> bool:
    return _thin(c) and all(
        not (c.hom(a, b) and c.hom(b, a)) for a in c.objects for b in c.objects if a != b
    )


def _upset_indicator(c: FinCat, a: int) -> Functor:
    """``x ↦ [a ≤ x]`` into Δ[1]; preserves meets and the top."""
    target = chain(2)
    on_obj = [1 if c.hom(a, x) else 0 for x in c.objects]
    return Functor.from_object_map(c, target, on_obj, name=f"up[{c.obj_names[a]}]")


def _image_functor(c: FinCat, gens: Sequence[int]) -> tuple[Functor, Functor]:
    """``x ↦ {i : gens[i] ≤ x}`` into the Boolean lattice and into its image."""
    k = len(gens)
    code = [frozenset(i + 1 for i, a in enumerate(gens) if c.hom(a, x)) for x in c.objects]
    cube = boolean_lattice(k)
    names = {frozenset(int(ch) for ch in nm[1:]): cube.obj(nm) for nm in cube.obj_names}
    full = Functor.from_object_map(c, cube, [names[s] for s in code], name="code")
    image = sorted(set(code), key=lambda s: (len(s), sorted(s)))
    img_names = [_set_name(s) for s in image]
    by_name = dict(zip(img_names, image))
    img_cat = preorder(img_names, lambda a, b: by_name[a] <= by_name[b], name=f"Im{k}")
    onto = Functor.from_object_map(c, img_cat, [img_cat.obj(_set_name(s)) for s in code], name="code*")
    return full, onto


@lru_cache(maxsize=None)
def corpus_functors(seed: int = 0) -> tuple[tuple[str, Functor], ...]:
    """Functors out of corpus categories, labelled; a mix of presentations,
    essential-surjectivity failures and lifting failures."""
    rng = random.Random(seed + 1)
    out: list[tuple[str, Functor]] = []
    for c in finite_limit_categories(seed):
        out.append((f"id[{c.name}]", identity_functor(c)))
        out.append((f"![{c.name}]", to_terminal(c)))
        if _is_poset(c) and c.n_objects > 1:
            picks = sorted(rng.sample(range(c.n_objects), min(2, c.n_objects)))
            for a in picks:
                out.append((f"up[{c.name},{c.obj_names[a]}]", _upset_indicator(c, a)))
            gens = sorted(rng.sample(range(c.n_objects), min(2, c.n_objects)))
            full, onto = _image_functor(c, gens)
            out.append((f"code[{c.name}]", full))
            out.append((f"code*[{c.name}]", onto))
        if c.n_objects <= 4:
            k = rng.choice([2, 3])
            K = action_category(k)
            on_obj = [rng.randrange(k) for _ in c.objects]
            out.append((f"toAct[{c.name}]", Functor.from_object_map(c, K, on_obj, name="toAct")))
    for a in (chain(2), chain(3), boolean_lattice(2)):
        for b in (action_category(2), chain(2)):
            p = product_category(a, b)
            if p.n_objects <= 8 and p.n_morphisms <= 40:
                out.append((f"pr1[{p.name}]", projection(a, b, 0)))
                out.append((f"pr2[{p.name}]", projection(a, b, 1)))
    return tuple(out)
