"""Terminal objects, binary products, equalizers and pullbacks by exhaustive search.

A cone is certified by checking, for every object ``x``, that composing with
the legs is a bijection from ``hom(x, apex)`` onto the cones with vertex
``x``.  That is the universal property stated directly; no shortcuts are
taken, categories here are tiny.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .core import FinCat, Functor, StructureError, Verdict

__all__ = [
    "LimitCone",
    "terminal_objects",
    "is_terminal",
    "binary_product",
    "equalizer",
    "pullback",
    "is_limit_cone",
    "has_finite_limits",
    "preserves_finite_limits",
]


@dataclass(frozen=True)
class LimitCone:
    shape: str  # "terminal" | "product" | "equalizer" | "pullback"
    diagram: tuple[int, ...]
    apex: int
    legs: tuple[int, ...]


def _cones(c: FinCat, shape: str, diagram: tuple[int, ...], x: int) -> set[tuple[int, ...]]:
    """All leg tuples of cones with vertex ``x`` over ``diagram``."""
    if shape == "terminal":
        return {()}
    if shape == "product":
        a, b = diagram
        return set(product(c.hom(x, a), c.hom(x, b)))
    if shape == "equalizer":
        f, g = diagram
        return {(h,) for h in c.hom(x, c.src[f]) if c.compose(f, h) == c.compose(g, h)}
    if shape == "pullback":
        f, g = diagram
        return {
            (h1, h2)
            for h1 in c.hom(x, c.src[f])
            for h2 in c.hom(x, c.src[g])
            if c.compose(f, h1) == c.compose(g, h2)
        }
    raise ValueError(f"unknown limit shape {shape!r}")


def is_limit_cone(c: FinCat, cone: LimitCone) -> Verdict:
    """Universality: every competing cone factors through exactly one morphism."""
    legs = cone.legs
    if legs not in _cones(c, cone.shape, cone.diagram, cone.apex):
        return Verdict.fail("not-a-cone", (cone.apex, *legs))
    for x in c.objects:
        cones = _cones(c, cone.shape, cone.diagram, x)
        images: dict[tuple[int, ...], int] = {}
        for k in c.hom(x, cone.apex):
            img = tuple(c.compose(l, k) for l in legs)
            if img in images:
                return Verdict.fail("mediator-not-unique", (x, images[img], k))
            images[img] = k
        for competing in sorted(cones):
            if competing not in images:
                return Verdict.fail("no-mediator", (x, *competing))
    return Verdict.ok([("limit", (cone.apex, *legs))])


def _search(c: FinCat, shape: str, diagram: tuple[int, ...]) -> LimitCone | None:
    for apex in c.objects:
        for legs in sorted(_cones(c, shape, diagram, apex)):
            cone = LimitCone(shape, diagram, apex, legs)
            if is_limit_cone(c, cone).holds:
                return cone
    return None


def terminal_objects(c: FinCat) -> list[int]:
    return [t for t in c.objects if all(len(c.hom(x, t)) == 1 for x in c.objects)]


def is_terminal(c: FinCat, t: int) -> bool:
    return all(len(c.hom(x, t)) == 1 for x in c.objects)


def binary_product(c: FinCat, a: int, b: int) -> LimitCone | None:
    return _search(c, "product", (a, b))


def equalizer(c: FinCat, f: int, g: int) -> LimitCone | None:
    if c.src[f] != c.src[g] or c.tgt[f] != c.tgt[g]:
        raise StructureError("equalizer of non-parallel morphisms")
    return _search(c, "equalizer", (f, g))


def pullback(c: FinCat, f: int, g: int) -> LimitCone | None:
    if c.tgt[f] != c.tgt[g]:
        raise StructureError("pullback of morphisms with different targets")
    return _search(c, "pullback", (f, g))


def _parallel_pairs(c: FinCat):
    for a, b in product(c.objects, repeat=2):
        hs = c.hom(a, b)
        for f in hs:
            for g in hs:
                if f < g:
                    yield f, g


def has_finite_limits(c: FinCat) -> Verdict:
    """Terminal object, all binary products and all equalizers."""
    ts = terminal_objects(c)
    if not ts:
        return Verdict.fail("no-terminal", ())
    witnesses = [("terminal", (ts[0],))]
    for a, b in product(c.objects, repeat=2):
        cone = binary_product(c, a, b)
        if cone is None:
            return Verdict.fail("no-product", (a, b))
        witnesses.append(("product", (a, b, cone.apex, *cone.legs)))
    for f, g in _parallel_pairs(c):
        cone = equalizer(c, f, g)
        if cone is None:
            return Verdict.fail("no-equalizer", (f, g))
        witnesses.append(("equalizer", (f, g, cone.apex, *cone.legs)))
    return Verdict.ok(witnesses)


def image_cone(F: Functor, cone: LimitCone) -> LimitCone:
    if cone.shape == "product":
        diagram = tuple(F.obj(x) for x in cone.diagram)
    elif cone.shape == "terminal":
        diagram = ()
    else:
        diagram = tuple(F(x) for x in cone.diagram)
    return LimitCone(cone.shape, diagram, F.obj(cone.apex), tuple(F(l) for l in cone.legs))


def preserves_finite_limits(F: Functor) -> Verdict:
    """Image of the chosen terminal/product/equalizer cones is again a limit.

    Preserving these three shapes suffices, since every finite limit is built
    from them.  Universality is checked in the codomain directly.
    """
    C, B = F.domain, F.codomain
    lim = has_finite_limits(C)
    if not lim.holds:
        raise StructureError(f"domain {C.name} lacks finite limits: {lim.counterexample}")
    t = terminal_objects(C)[0]
    if not is_terminal(B, F.obj(t)):
        return Verdict.fail("terminal-not-preserved", (t,))
    for a, b in product(C.objects, repeat=2):
        cone = binary_product(C, a, b)
        if not is_limit_cone(B, image_cone(F, cone)).holds:
            return Verdict.fail("product-not-preserved", (a, b))
    for f, g in _parallel_pairs(C):
        cone = equalizer(C, f, g)
        if not is_limit_cone(B, image_cone(F, cone)).holds:
            return Verdict.fail("equalizer-not-preserved", (f, g))
    return Verdict.ok()
