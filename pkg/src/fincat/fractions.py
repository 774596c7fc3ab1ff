"""Calculus of right fractions and the localization ``C[Σ^-1]`` built from spans.

A right fraction ``(s, f)`` with ``s: x' -> x`` in Σ and ``f: x' -> y``
stands for ``f∘s^-1: x -> y``.  Two fractions are equivalent when they have
a common restriction ``(s∘a, f∘a) = (t∘b, g∘b)`` with ``s∘a`` in Σ.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from ._unionfind import UnionFind
from .comma import C_d, Subcat
from .core import (
    FinCat,
    Functor,
    StructureError,
    Verdict,
    compose_functors,
    inverse,
    is_isomorphism,
    opposite,
    opposite_functor,
)

__all__ = [
    "Fraction",
    "SigmaSet",
    "LocalizationResult",
    "LocalizationError",
    "check_right_fractions",
    "check_left_fractions",
    "localize",
    "localize_left",
    "ore_completions",
    "compose_fractions",
    "induced_functor",
    "A_sigma",
]

Fraction = tuple[int, int]  # (denominator s in Σ, numerator f)


class LocalizationError(ValueError):
    """The fraction calculus does not hold, or an internal invariant broke."""


@dataclass(frozen=True)
class SigmaSet:
    carrier: FinCat
    members: frozenset[int]

    def __init__(self, carrier: FinCat, members: Iterable[int]):
        members = frozenset(int(m) for m in members)
        for m in members:
            if not 0 <= m < carrier.n_morphisms:
                raise StructureError(f"Σ refers to unknown morphism {m!r}")
        object.__setattr__(self, "carrier", carrier)
        object.__setattr__(self, "members", members)

    def __contains__(self, m: int) -> bool:
        return m in self.members

    @classmethod
    def identities(cls, c: FinCat) -> "SigmaSet":
        return cls(c, c.identities)

    @classmethod
    def from_names(cls, c: FinCat, names: Iterable[str], with_identities: bool = True) -> "SigmaSet":
        ms = {c.mor(n) for n in names}
        if with_identities:
            ms |= set(c.identities)
        return cls(c, ms)


def _sigma(c: FinCat, sigma) -> frozenset[int]:
    if isinstance(sigma, SigmaSet):
        if sigma.carrier != c:
            raise StructureError("Σ belongs to a different category")
        return sigma.members
    return SigmaSet(c, sigma).members


def check_right_fractions(c: FinCat, sigma) -> Verdict:
    """Identities and composites in Σ; right Ore squares; right cancellability."""
    S = _sigma(c, sigma)
    parts = {}
    bad = next(((x,) for x in c.objects if c.identity(x) not in S), None)
    if bad is None:
        bad = next(
            ((t, s) for t in sorted(S) for s in sorted(S) if c.tgt[s] == c.src[t] and c.compose(t, s) not in S),
            None,
        )
        parts["RF1"] = Verdict.ok() if bad is None else Verdict.fail("RF1-composition", bad)
    else:
        parts["RF1"] = Verdict.fail("RF1-identity", bad)

    ore = Verdict.ok()
    for s in sorted(S):
        for f in c.morphisms:
            if c.tgt[f] != c.tgt[s]:
                continue
            if next(ore_completions(c, S, s, f), None) is None:
                ore = Verdict.fail("RF2-ore", (s, f))
                break
        if not ore.holds:
            break
    parts["RF2"] = ore

    cancel = Verdict.ok()
    for s in sorted(S):
        y = c.src[s]
        for x in c.objects:
            hs = c.hom(x, y)
            for f in hs:
                for g in hs:
                    if f >= g or c.compose(s, f) != c.compose(s, g):
                        continue
                    if not any(
                        c.compose(f, t) == c.compose(g, t) for t in sorted(S) if c.tgt[t] == x
                    ):
                        cancel = Verdict.fail("RF3-cancel", (s, f, g))
                        break
                if not cancel.holds:
                    break
            if not cancel.holds:
                break
        if not cancel.holds:
            break
    parts["RF3"] = cancel
    return Verdict.all_of(parts)


def check_left_fractions(c: FinCat, sigma) -> Verdict:
    return check_right_fractions(opposite(c), _sigma(c, sigma))


def ore_completions(c: FinCat, S: frozenset[int], s: int, f: int) -> Iterator[tuple[int, int]]:
    """All ``(t, g)`` with ``t: w -> src f`` in Σ and ``s∘g = f∘t``, ascending ``(w, t, g)``."""
    x, y1 = c.src[f], c.src[s]
    for w in c.objects:
        for t in c.hom(w, x):
            if t not in S:
                continue
            ft = c.compose(f, t)
            for g in c.hom(w, y1):
                if c.compose(s, g) == ft:
                    yield t, g


@dataclass(frozen=True, eq=False)
class LocalizationResult:
    quotient: FinCat
    p: Functor
    class_of: dict  # Fraction -> quotient morphism
    reps: tuple[Fraction, ...]  # quotient morphism -> canonical fraction
    sigma: frozenset[int]
    left: bool = False

    def fractions(self, q: int) -> list[Fraction]:
        return sorted(fr for fr, k in self.class_of.items() if k == q)


def _fractions(c: FinCat, S: frozenset[int], x: int, y: int) -> list[Fraction]:
    return sorted((s, f) for s in S if c.tgt[s] == x for f in c.hom(c.src[s], y))


def _restrictions(c: FinCat, S: frozenset[int], fr: Fraction) -> set[Fraction]:
    s, f = fr
    out = set()
    for w in c.objects:
        for a in c.hom(w, c.src[s]):
            sa = c.compose(s, a)
            if sa in S:
                out.add((sa, c.compose(f, a)))
    return out


def _classes(c: FinCat, S: frozenset[int], x: int, y: int) -> list[list[Fraction]]:
    fracs = _fractions(c, S, x, y)
    res = [_restrictions(c, S, fr) for fr in fracs]
    n = len(fracs)
    related = [[not res[i].isdisjoint(res[j]) for j in range(n)] for i in range(n)]
    uf = UnionFind(n)
    for i in range(n):
        for j in range(i + 1, n):
            if related[i][j]:
                uf.union(i, j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(uf.find(i), []).append(i)
    for members in groups.values():
        for i in members:
            for j in members:
                if not related[i][j]:
                    raise LocalizationError(
                        f"fraction relation needs a transitive closure step on hom({x},{y})"
                    )
    return [[fracs[i] for i in members] for _, members in sorted(groups.items())]


def localize(c: FinCat, sigma, *, name: str | None = None) -> LocalizationResult:
    """The category of right fractions; refuses to run unless the axioms hold."""
    S = _sigma(c, sigma)
    verdict = check_right_fractions(c, S)
    if not verdict.holds:
        raise LocalizationError(f"Σ does not admit right fractions: {verdict.counterexample}")
    n = c.n_objects
    hom_classes = {(x, y): _classes(c, S, x, y) for x in c.objects for y in c.objects}

    # identities first, then (x, y, canonical representative) order
    reps: list[Fraction] = [(c.identity(x), c.identity(x)) for x in c.objects]
    ends: list[tuple[int, int]] = [(x, x) for x in c.objects]
    class_of: dict[Fraction, int] = {}
    for x in c.objects:
        for cls in hom_classes[x, x]:
            for fr in cls:
                if fr == reps[x]:
                    for g in cls:
                        class_of[g] = x
    for (x, y), classes in sorted(hom_classes.items()):
        for cls in classes:
            if cls[0] in class_of:
                continue
            k = len(reps)
            reps.append(cls[0])
            ends.append((x, y))
            for fr in cls:
                class_of[fr] = k

    def frac_name(fr: Fraction) -> str:
        s, f = fr
        if c.is_identity(s):
            return c.mor_names[f]
        return f"{c.mor_names[f]}/{c.mor_names[s]}"

    names = [f"id_{c.obj_names[x]}" for x in c.objects] + [frac_name(fr) for fr in reps[n:]]
    if len(set(names)) != len(names):
        names = names[:n] + [f"{nm}#{k}" for k, nm in enumerate(names[n:], start=n)]

    table = {}
    for g in range(len(reps)):
        for f in range(len(reps)):
            if ends[f][1] == ends[g][0]:
                table[g, f] = class_of[_compose(c, S, reps[f], reps[g])]
    specs = [(names[k], ends[k][0], ends[k][1]) for k in range(len(reps))]
    quotient = FinCat(c.obj_names, specs, list(range(n)), table, name or f"{c.name}[S^-1]")
    p = Functor(
        c,
        quotient,
        list(c.objects),
        [class_of[c.identity(c.src[f]), f] for f in c.morphisms],
        name="P",
    )
    return LocalizationResult(quotient, p, class_of, tuple(reps), S)


def _compose(c: FinCat, S: frozenset[int], first: Fraction, second: Fraction, completion=None) -> Fraction:
    """``second ∘ first`` on representatives via an Ore completion."""
    s, f = first
    t, g = second
    if completion is None:
        completion = next(ore_completions(c, S, t, f), None)
        if completion is None:
            raise LocalizationError("no Ore completion; right Ore axiom violated")
    t1, f1 = completion
    return c.compose(s, t1), c.compose(g, f1)


def compose_fractions(loc: LocalizationResult, c: FinCat, first: Fraction, second: Fraction, completion=None) -> int:
    """Class of ``second ∘ first``, optionally through a given Ore completion."""
    return loc.class_of[_compose(c, loc.sigma, first, second, completion)]


def localize_left(c: FinCat, sigma, *, name: str | None = None) -> LocalizationResult:
    """Left fractions ``s^-1∘f``, computed as right fractions in the opposite."""
    S = _sigma(c, sigma)
    cop = opposite(c)
    loc = localize(cop, S)
    q = opposite(loc.quotient)
    names = list(q.mor_names)
    for k in range(c.n_objects, q.n_morphisms):
        s, f = loc.reps[k]
        if not c.is_identity(s):
            names[k] = f"{c.mor_names[s]}\\{c.mor_names[f]}"
    if len(set(names)) != len(names):
        names = names[: c.n_objects] + [f"{nm}#{k}" for k, nm in enumerate(names[c.n_objects :], start=c.n_objects)]
    specs = [(names[k], q.src[k], q.tgt[k]) for k in q.morphisms]
    quotient = FinCat(q.obj_names, specs, q.identities, q.compose_entries(), name or f"[S^-1]{c.name}")
    p = opposite_functor(loc.p, domain=c, codomain=quotient)
    return LocalizationResult(quotient, p, loc.class_of, loc.reps, S, left=True)


def induced_functor(F: Functor, sigma, loc: LocalizationResult) -> Functor:
    """The unique ``H`` with ``H∘P = F``; ``H[(s, g)] = Fg∘(Fs)^-1``."""
    C, B = F.domain, F.codomain
    S = _sigma(C, sigma)
    for s in sorted(S):
        if not is_isomorphism(B, F(s)).holds:
            raise StructureError(f"{C.describe(s)} in Σ is not inverted by {F.name}")
    Q = loc.quotient
    on_mor = [-1] * Q.n_morphisms
    for (s, g), q in sorted(loc.class_of.items()):
        if loc.left:
            val = B.compose(inverse(B, F(s)), F(g))
        else:
            val = B.compose(F(g), inverse(B, F(s)))
        if on_mor[q] == -1:
            on_mor[q] = val
        elif on_mor[q] != val:
            raise LocalizationError(f"induced functor is not well defined on class {Q.mor_names[q]}")
    H = Functor(Q, B, list(F.on_obj), on_mor, name=f"H_{F.name}")
    if compose_functors(H, loc.p) != F:
        raise LocalizationError("H∘P differs from F")
    return H


def A_sigma(F: Functor, sigma, d: int) -> Subcat:
    """Full subcategory of ``C_d`` on the ``⟨e, φ⟩`` with ``φ`` in Σ."""
    S = _sigma(F.domain, sigma)
    for s in sorted(S):
        if not is_isomorphism(F.codomain, F(s)).holds:
            raise StructureError(f"{F.domain.describe(s)} in Σ is not inverted by {F.name}")
    cd = C_d(F, d)
    return Subcat.full(cd, [i for i, (_, phi) in enumerate(cd.labels) if phi in S])
