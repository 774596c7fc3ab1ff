"""Independent brute-force oracles.

Nothing here imports the comma, limits, fractions or presheaf modules; each
function recomputes its answer straight from the composition table so the
tests compare two unrelated routes.
"""
from __future__ import annotations

from itertools import product

from fincat.core import FinCat, Functor


def comp(c: FinCat, g: int, f: int) -> int:
    return int(c.table[g, f])


def homs(c: FinCat, a: int, b: int) -> list[int]:
    return [k for k in range(c.n_morphisms) if c.src[k] == a and c.tgt[k] == b]


def inverses(c: FinCat, f: int) -> list[int]:
    s, t = c.src[f], c.tgt[f]
    return [g for g in homs(c, t, s) if comp(c, g, f) == c.identities[s] and comp(c, f, g) == c.identities[t]]


def terminal(c: FinCat) -> list[int]:
    return [t for t in range(c.n_objects) if all(len(homs(c, x, t)) == 1 for x in range(c.n_objects))]


def leq(c: FinCat, a: int, b: int) -> bool:
    """Order of a thin category."""
    return bool(homs(c, a, b))


def meet(c: FinCat, a: int, b: int) -> int | None:
    lower = [x for x in range(c.n_objects) if leq(c, x, a) and leq(c, x, b)]
    tops = [x for x in lower if all(leq(c, y, x) for y in lower)]
    return tops[0] if tops else None


def all_functors(c: FinCat, x: FinCat) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Every ``(on_obj, on_mor)`` pair satisfying the functor laws, by exhaustion."""
    out = []
    for on_obj in product(range(x.n_objects), repeat=c.n_objects):
        cands = [homs(x, on_obj[c.src[k]], on_obj[c.tgt[k]]) for k in range(c.n_morphisms)]
        for on_mor in product(*cands):
            if any(on_mor[c.identities[o]] != x.identities[on_obj[o]] for o in range(c.n_objects)):
                continue
            ok = True
            for g in range(c.n_morphisms):
                for f in range(c.n_morphisms):
                    if c.tgt[f] == c.src[g] and on_mor[comp(c, g, f)] != comp(x, on_mor[g], on_mor[f]):
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                out.append((tuple(on_obj), tuple(on_mor)))
    return out


def components(n: int, edges) -> list[int]:
    """Component label per vertex by repeated breadth-first search."""
    adj: list[list[int]] = [[] for _ in range(n)]
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    lab = [-1] * n
    cur = 0
    for v in range(n):
        if lab[v] >= 0:
            continue
        stack = [v]
        lab[v] = cur
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if lab[w] < 0:
                    lab[w] = cur
                    stack.append(w)
        cur += 1
    return lab


def kan_value(F: Functor, sizes, action, b: int):
    """``F_*X(b)`` straight from the colimit formula.

    Returns the element list ``(c, beta, v)`` and a component label for each.
    """
    C, B = F.domain, F.codomain
    elems = [(c, beta, v) for c in range(C.n_objects) for beta in homs(B, b, F.on_obj[c]) for v in range(sizes[c])]
    pos = {e: i for i, e in enumerate(elems)}
    edges = []
    for k in range(C.n_morphisms):
        c0, c1 = C.src[k], C.tgt[k]
        for beta in homs(B, b, F.on_obj[c0]):
            beta1 = comp(B, F.on_mor[k], beta)
            for v in range(sizes[c1]):
                edges.append((pos[(c1, beta1, v)], pos[(c0, beta, action[k][v])]))
    return elems, components(len(elems), edges)


def counit_bijective(F: Functor, sizes, action) -> list[bool]:
    """Per codomain object, whether ``F_*F^*Y(b) -> Y(b)`` is a bijection."""
    C, B = F.domain, F.codomain
    rs = [sizes[F.on_obj[c]] for c in range(C.n_objects)]
    ra = [action[F.on_mor[k]] for k in range(C.n_morphisms)]
    out = []
    for b in range(B.n_objects):
        elems, lab = kan_value(F, rs, ra, b)
        image: dict[int, int] = {}
        ok = True
        for (c, beta, v), l in zip(elems, lab):
            y = action[beta][v]
            if image.setdefault(l, y) != y:
                ok = False
        vals = list(image.values())
        out.append(ok and len(set(vals)) == len(vals) == sizes[b])
    return out


def unit_bijective(F: Functor, sizes, action) -> list[bool]:
    """Per domain object, whether ``X(d) -> F_*X(Fd)`` is a bijection."""
    C, B = F.domain, F.codomain
    out = []
    for d in range(C.n_objects):
        fd = F.on_obj[d]
        elems, lab = kan_value(F, sizes, action, fd)
        mine = [lab[elems.index((d, B.identities[fd], v))] for v in range(sizes[d])]
        out.append(len(set(mine)) == len(mine) == len(set(lab)))
    return out


def is_full_and_faithful(F: Functor) -> bool:
    C, B = F.domain, F.codomain
    for a in range(C.n_objects):
        for b in range(C.n_objects):
            img = sorted(F.on_mor[k] for k in homs(C, a, b))
            if img != sorted(homs(B, F.on_obj[a], F.on_obj[b])):
                return False
    return True


def is_ess_surjective(F: Functor) -> bool:
    B = F.codomain
    return all(
        any(inverses(B, k) for c in range(F.domain.n_objects) for k in homs(B, F.on_obj[c], b))
        for b in range(B.n_objects)
    )


def category_laws(n_mor: int, src, tgt, identities, entries: dict) -> bool:
    """Unit and associativity laws for a composition dictionary ``(g, f) -> g∘f``."""
    pairs = [(g, f) for g in range(n_mor) for f in range(n_mor) if src[g] == tgt[f]]
    if any((g, f) not in entries for g, f in pairs):
        return False
    for (g, f), h in entries.items():
        if src[h] != src[f] or tgt[h] != tgt[g]:
            return False
    for f in range(n_mor):
        if entries[identities[tgt[f]], f] != f or entries[f, identities[src[f]]] != f:
            return False
    for h, g in pairs:
        for f in range(n_mor):
            if src[g] == tgt[f] and entries[h, entries[g, f]] != entries[entries[h, g], f]:
                return False
    return True
