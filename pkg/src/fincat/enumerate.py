"""Brute-force enumeration: functors, presheaves, natural transformations.

These back the independent checks (universal properties, adjunction
bijections, probe presheaves) and are only meant for desk-scale inputs.
"""
from __future__ import annotations

import random
from itertools import product
from typing import Iterable, Iterator

from .core import FinCat, Functor, is_isomorphism
from .presheaf import NatTrans, Presheaf

__all__ = [
    "functors",
    "presheaves",
    "presheaf_tables",
    "sample_presheaves",
    "nat_transformations",
    "natural_isomorphism",
]


def _plan(c: FinCat) -> tuple[list[int], dict[int, tuple[int, int]]]:
    """Order the non-identity morphisms so that composites follow their factors.

    Returns the order and, for each morphism that is a composite of two
    earlier ones, that factorization; only the others need a choice.
    """
    factors: dict[int, list[tuple[int, int]]] = {}
    for g, f in c.composable_pairs():
        if c.is_identity(g) or c.is_identity(f):
            continue
        factors.setdefault(c.compose(g, f), []).append((g, f))
    remaining = c.non_identity()
    placed: set[int] = set()
    order: list[int] = []
    derived: dict[int, tuple[int, int]] = {}
    while remaining:
        for k in remaining:
            fac = next(((g, f) for g, f in factors.get(k, ()) if g in placed and f in placed), None)
            if fac is not None:
                derived[k] = fac
                break
        else:
            # prefer indecomposables so composites get forced early
            k = min(remaining, key=lambda m: (m in factors, m))
        remaining.remove(k)
        placed.add(k)
        order.append(k)
    return order, derived


def _constraints(c: FinCat, order: list[int]) -> dict[int, list[tuple[int, int, int]]]:
    """For each morphism, the composition triples that become fully assigned with it."""
    pos = {k: n for n, k in enumerate(order)}
    out: dict[int, list[tuple[int, int, int]]] = {k: [] for k in order}
    for g, f in c.composable_pairs():
        h = c.compose(g, f)
        if c.is_identity(g) or c.is_identity(f):
            continue
        last = max((pos[k], k) for k in (g, f, h) if k in pos)[1]
        out[last].append((g, f, h))
    return out


def functors(c: FinCat, x: FinCat) -> Iterator[Functor]:
    """Every functor ``c -> x``, grouped by object map in lexicographic order."""
    order, derived = _plan(c)
    cons = _constraints(c, order)
    for on_obj in product(x.objects, repeat=c.n_objects):
        on_mor = [-1] * c.n_morphisms
        for o in c.objects:
            on_mor[c.identity(o)] = x.identity(on_obj[o])
        cands = [x.hom(on_obj[c.src[k]], on_obj[c.tgt[k]]) for k in order]
        if any(not cs for cs in cands):
            continue

        def rec(i: int):
            if i == len(order):
                yield Functor(c, x, on_obj, on_mor)
                return
            k = order[i]
            if k in derived:
                g, f = derived[k]
                m = x.compose(on_mor[g], on_mor[f])
                choices = (m,) if m in cands[i] else ()
            else:
                choices = cands[i]
            for m in choices:
                on_mor[k] = m
                if all(on_mor[h] == x.compose(on_mor[g], on_mor[f]) for g, f, h in cons[k]):
                    yield from rec(i + 1)
            on_mor[k] = -1

        yield from rec(0)


def _functions(n: int, m: int) -> list[tuple[int, ...]]:
    return list(product(range(m), repeat=n))


def _choices(k: int, derived, action: list, inv) -> list | None:
    """The forced action of a composite ``k``, or ``None`` when ``k`` is free."""
    if k not in derived:
        return None
    g, f = derived[k]
    fn = tuple(action[f][v] for v in action[g])
    if k in inv and len(set(fn)) != len(fn):
        return []
    return [fn]


def presheaves(
    c: FinCat,
    max_size: int,
    *,
    inverting: Iterable[int] = (),
    min_size: int = 0,
) -> Iterator[Presheaf]:
    """Every presheaf on ``c`` with value sets of size ``min_size..max_size``.

    ``inverting`` restricts to presheaves sending those morphisms to bijections.
    """
    for sizes, action in presheaf_tables(c, max_size, inverting=inverting, min_size=min_size):
        yield Presheaf(c, sizes, action)


def presheaf_tables(
    c: FinCat,
    max_size: int,
    *,
    inverting: Iterable[int] = (),
    min_size: int = 0,
) -> Iterator[tuple[tuple[int, ...], tuple[tuple[int, ...], ...]]]:
    """As :func:`presheaves`, yielding bare ``(sizes, action)`` tables."""
    inv = frozenset(inverting)
    order, derived = _plan(c)
    cons = _constraints(c, order)
    for sizes in product(range(min_size, max_size + 1), repeat=c.n_objects):
        if any(sizes[c.src[k]] != sizes[c.tgt[k]] for k in inv):
            continue
        action: list = [None] * c.n_morphisms
        for o in c.objects:
            action[c.identity(o)] = tuple(range(sizes[o]))
        cands = []
        for k in order:
            fs = _functions(sizes[c.tgt[k]], sizes[c.src[k]])
            if k in inv:
                fs = [f for f in fs if len(set(f)) == len(f)]
            cands.append(fs)
        if any(not cs for cs in cands):
            continue

        def consistent(k: int) -> bool:
            for g, f, h in cons[k]:
                af, ah = action[f], action[h]
                for v, w in enumerate(action[g]):
                    if ah[v] != af[w]:
                        return False
            return True

        def rec(i: int):
            if i == len(order):
                yield sizes, tuple(action)
                return
            k = order[i]
            forced = _choices(k, derived, action, inv)
            for fn in cands[i] if forced is None else forced:
                action[k] = fn
                if consistent(k):
                    yield from rec(i + 1)
            action[k] = None

        yield from rec(0)


def _size_classes(c: FinCat, inv: frozenset[int]) -> list[int]:
    """Objects joined by an isomorphism or an inverted morphism share a size."""
    root = list(c.objects)

    def find(x: int) -> int:
        while root[x] != x:
            root[x] = root[root[x]]
            x = root[x]
        return x

    for k in c.non_identity():
        if k in inv or is_isomorphism(c, k).holds:
            a, b = find(c.src[k]), find(c.tgt[k])
            root[max(a, b)] = min(a, b)
    return [find(x) for x in c.objects]


def sample_presheaves(
    c: FinCat,
    max_size: int,
    count: int,
    rng: random.Random,
    *,
    inverting: Iterable[int] = (),
    budget: int = 2000,
) -> list[Presheaf]:
    """``count`` presheaves found by randomized backtracking (duplicates removed).

    Each attempt draws sizes (equal along isomorphisms, some value reaching
    ``max_size``) and gives up after ``budget`` search steps.
    """
    inv = frozenset(inverting)
    order, derived = _plan(c)
    cons = _constraints(c, order)
    cls = _size_classes(c, inv)
    out: dict = {}
    attempts = 0
    while len(out) < count and attempts < 20 * count:
        attempts += 1
        drawn = {r: rng.randint(0, max_size) for r in sorted(set(cls))}
        sizes = [drawn[cls[x]] for x in c.objects]
        # X(tgt) -> X(src) forces X(tgt) empty whenever X(src) is
        changed = True
        while changed:
            changed = False
            for k in c.morphisms:
                if sizes[c.src[k]] == 0 and sizes[c.tgt[k]] != 0:
                    sizes[c.tgt[k]] = 0
                    changed = True
        if max(sizes, default=0) < max_size:
            continue
        sizes = tuple(sizes)
        action: list = [None] * c.n_morphisms
        for o in c.objects:
            action[c.identity(o)] = tuple(range(sizes[o]))
        steps = [0]

        def rec(i: int):
            if i == len(order):
                return True
            steps[0] += 1
            if steps[0] > budget:
                return False
            k = order[i]
            fs = _choices(k, derived, action, inv)
            if fs is None:
                fs = _functions(sizes[c.tgt[k]], sizes[c.src[k]])
                if k in inv:
                    fs = [f for f in fs if len(set(f)) == len(f)]
                rng.shuffle(fs)
            for fn in fs:
                action[k] = fn
                if all(action[h] == tuple(action[f][v] for v in action[g]) for g, f, h in cons[k]):
                    if rec(i + 1):
                        return True
                if steps[0] > budget:
                    break
            action[k] = None
            return False

        if rec(0):
            p = Presheaf(c, sizes, tuple(action))
            out.setdefault((p.sizes, p.action), p)
    return list(out.values())


def nat_transformations(x: Presheaf, y: Presheaf) -> Iterator[NatTrans]:
    """Every natural transformation ``x -> y``."""
    c = x.base
    objs = list(c.objects)
    comps: list = [None] * len(objs)

    def ok(upto: int) -> bool:
        for k in c.morphisms:
            s, t = c.src[k], c.tgt[k]
            if s > upto or t > upto:
                continue
            if any(comps[s][x.action[k][v]] != y.action[k][comps[t][v]] for v in range(x.sizes[t])):
                return False
        return True

    def rec(i: int):
        if i == len(objs):
            yield NatTrans(x, y, tuple(comps))
            return
        for fn in product(range(y.sizes[i]), repeat=x.sizes[i]):
            comps[i] = fn
            if ok(i):
                yield from rec(i + 1)
        comps[i] = None

    yield from rec(0)


def natural_isomorphism(f: Functor, g: Functor) -> tuple[int, ...] | None:
    """Components of some natural isomorphism ``f => g``, or ``None``."""
    B = f.codomain
    C = f.domain
    cands = [
        [m for m in B.hom(f.obj(x), g.obj(x)) if is_isomorphism(B, m).holds] for x in C.objects
    ]
    comps: list = [None] * C.n_objects

    def ok(upto: int) -> bool:
        for k in C.morphisms:
            s, t = C.src[k], C.tgt[k]
            if s > upto or t > upto:
                continue
            if B.compose(g(k), comps[s]) != B.compose(comps[t], f(k)):
                return False
        return True

    def rec(i: int):
        if i == C.n_objects:
            return tuple(comps)
        for m in cands[i]:
            comps[i] = m
            if ok(i):
                r = rec(i + 1)
                if r is not None:
                    return r
        comps[i] = None
        return None

    return rec(0)
