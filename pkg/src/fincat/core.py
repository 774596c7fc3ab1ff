"""Finite categories, functors, adjunctions and the basic checks on them.

A :class:`FinCat` is stored as explicit tables.  Objects and morphisms are
dense integer ids (``0..n-1``) in the order they were given; every search in
this package iterates in ascending id order so that reported witnesses and
counterexamples are reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Iterable, Iterator, Mapping, Sequence

import numpy as np

__all__ = [
    "StructureError",
    "Verdict",
    "FinCat",
    "Functor",
    "Adjunction",
    "assemble",
    "identity_functor",
    "compose_functors",
    "validate_category",
    "validate_functor",
    "is_isomorphism",
    "opposite",
    "opposite_functor",
    "is_equivalence",
    "is_full",
    "is_faithful",
    "is_essentially_surjective",
    "verify_adjunction",
]


class StructureError(ValueError):
    """Malformed tables: unknown ids, non-total maps, misplaced entries."""


@dataclass(frozen=True)
class Verdict:
    """Outcome of a check.

    ``witnesses`` back a positive answer, ``counterexample`` is the first
    failing instance of a negative one.  Both are ``(label, data)`` pairs with
    ``data`` a tuple of ids.  Composite checks keep their sub-verdicts in
    ``parts``.
    """

    holds: bool
    witnesses: tuple = ()
    counterexample: tuple | None = None
    parts: Mapping[str, "Verdict"] = field(default_factory=dict, compare=False)

    def __bool__(self) -> bool:
        return self.holds

    @classmethod
    def ok(cls, witnesses: Iterable = (), parts=None) -> "Verdict":
        return cls(True, tuple(witnesses), None, dict(parts or {}))

    @classmethod
    def fail(cls, label: str, data: tuple, parts=None) -> "Verdict":
        return cls(False, (), (label, tuple(data)), dict(parts or {}))

    @classmethod
    def all_of(cls, parts: Mapping[str, "Verdict"]) -> "Verdict":
        """Conjunction; the counterexample is that of the first failing part."""
        for v in parts.values():
            if not v.holds:
                return cls(False, (), v.counterexample, dict(parts))
        wit = tuple(w for v in parts.values() for w in v.witnesses)
        return cls(True, wit, None, dict(parts))


class FinCat:
    """A finite category given by object, morphism and composition tables.

    ``compose`` maps ``(g, f)`` to ``g∘f``; an entry is allowed only when
    ``tgt(f) == src(g)``.  Missing entries are not a structural error, they
    are reported by :func:`validate_category` as a law violation.
    """

    def __init__(
        self,
        objects: Sequence[str],
        morphisms: Sequence[tuple[str, int, int]],
        identities: Sequence[int],
        compose: Mapping[tuple[int, int], int],
        name: str = "C",
    ):
        self.name = name
        self.obj_names = tuple(str(o) for o in objects)
        self.mor_names = tuple(str(m[0]) for m in morphisms)
        n, m = len(self.obj_names), len(self.mor_names)
        if len(set(self.obj_names)) != n:
            raise StructureError(f"{name}: duplicate object names")
        if len(set(self.mor_names)) != m:
            raise StructureError(f"{name}: duplicate morphism names")
        src, tgt = [], []
        for mname, s, t in morphisms:
            for end in (s, t):
                if not (isinstance(end, (int, np.integer)) and 0 <= end < n):
                    raise StructureError(f"{name}: morphism {mname!r} has unknown endpoint {end!r}")
            src.append(int(s))
            tgt.append(int(t))
        self.src = tuple(src)
        self.tgt = tuple(tgt)
        if len(identities) != n:
            raise StructureError(f"{name}: identity map is not total on objects")
        for i in identities:
            if not 0 <= i < m:
                raise StructureError(f"{name}: identity refers to unknown morphism {i!r}")
        self.identities = tuple(int(i) for i in identities)
        table = np.full((m, m), -1, dtype=np.int64)
        for (g, f), h in compose.items():
            for k in (g, f, h):
                if not 0 <= k < m:
                    raise StructureError(f"{name}: composition refers to unknown morphism {k!r}")
            if self.tgt[f] != self.src[g]:
                raise StructureError(
                    f"{name}: non-composable pair has an entry: "
                    f"{self.mor_names[g]} ∘ {self.mor_names[f]}"
                )
            table[g, f] = h
        table.setflags(write=False)
        self.table = table
        self._comp = table.tolist()
        homs: dict[tuple[int, int], list[int]] = {(a, b): [] for a in range(n) for b in range(n)}
        for k in range(m):
            homs[self.src[k], self.tgt[k]].append(k)
        self._hom = {k: tuple(v) for k, v in homs.items()}
        self._obj_index = {o: i for i, o in enumerate(self.obj_names)}
        self._mor_index = {o: i for i, o in enumerate(self.mor_names)}

    # -- basic access -------------------------------------------------------

    @property
    def n_objects(self) -> int:
        return len(self.obj_names)

    @property
    def n_morphisms(self) -> int:
        return len(self.mor_names)

    @property
    def objects(self) -> range:
        return range(len(self.obj_names))

    @property
    def morphisms(self) -> range:
        return range(len(self.mor_names))

    def hom(self, a: int, b: int) -> tuple[int, ...]:
        return self._hom[a, b]

    def identity(self, x: int) -> int:
        return self.identities[x]

    def is_identity(self, f: int) -> bool:
        return self.identities[self.src[f]] == f

    def compose(self, g: int, f: int) -> int:
        """``g∘f``; raises ``KeyError`` if undefined."""
        h = self._comp[g][f]
        if h < 0:
            raise KeyError((g, f))
        return h

    def compose_path(self, *ms: int) -> int:
        """``ms[0]∘ms[1]∘...`` (rightmost applied first)."""
        out = ms[-1]
        for g in reversed(ms[:-1]):
            out = self.compose(g, out)
        return out

    def obj(self, name: str) -> int:
        return self._obj_index[name]

    def mor(self, name: str) -> int:
        return self._mor_index[name]

    def describe(self, f: int) -> str:
        s, t = self.src[f], self.tgt[f]
        return f"{self.mor_names[f]}: {self.obj_names[s]} -> {self.obj_names[t]}"

    def composable_pairs(self) -> Iterator[tuple[int, int]]:
        for g in self.morphisms:
            for f in self.morphisms:
                if self.tgt[f] == self.src[g]:
                    yield g, f

    def non_identity(self) -> list[int]:
        return [f for f in self.morphisms if not self.is_identity(f)]

    def compose_entries(self) -> dict[tuple[int, int], int]:
        gs, fs = np.nonzero(self.table >= 0)
        return {(int(g), int(f)): int(self.table[g, f]) for g, f in zip(gs, fs)}

    def renamed(self, name: str) -> "FinCat":
        return FinCat(self.obj_names, self.morphism_specs(), self.identities, self.compose_entries(), name)

    def morphism_specs(self) -> list[tuple[str, int, int]]:
        return [(self.mor_names[k], self.src[k], self.tgt[k]) for k in self.morphisms]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FinCat):
            return NotImplemented
        return (
            self.obj_names == other.obj_names
            and self.mor_names == other.mor_names
            and self.src == other.src
            and self.tgt == other.tgt
            and self.identities == other.identities
            and np.array_equal(self.table, other.table)
        )

    def __hash__(self) -> int:
        return hash((self.obj_names, self.mor_names, self.src, self.tgt, self.table.tobytes()))

    def __repr__(self) -> str:
        return f"FinCat({self.name!r}, {self.n_objects} objects, {self.n_morphisms} morphisms)"

    # -- constructors -------------------------------------------------------

    @classmethod
    def build(
        cls,
        objects: Sequence[str],
        arrows: Sequence[tuple[str, str, str]] = (),
        compose: Mapping[tuple[str, str], str] | None = None,
        name: str = "C",
    ) -> "FinCat":
        """Build from names; identities ``id_<obj>`` and their composites are added."""
        objects = [str(o) for o in objects]
        oidx = {o: i for i, o in enumerate(objects)}
        specs = [(f"id_{o}", i, i) for i, o in enumerate(objects)]
        for a, s, t in arrows:
            if s not in oidx or t not in oidx:
                raise StructureError(f"{name}: morphism {a!r} has unknown endpoint")
            specs.append((a, oidx[s], oidx[t]))
        midx = {s[0]: i for i, s in enumerate(specs)}
        if len(midx) != len(specs):
            raise StructureError(f"{name}: duplicate morphism names")
        ids = list(range(len(objects)))
        table: dict[tuple[int, int], int] = {}
        for k, (_, s, t) in enumerate(specs):
            table[k, ids[s]] = k
            table[ids[t], k] = k
        for (g, f), h in (compose or {}).items():
            for x in (g, f, h):
                if x not in midx:
                    raise StructureError(f"{name}: composition refers to unknown morphism {x!r}")
            table[midx[g], midx[f]] = midx[h]
        return cls(objects, specs, ids, table, name)


def assemble(
    obj_names: Sequence[str],
    arrows: Sequence[tuple[str, int, int]],
    identities: Sequence[int],
    compose_fn: Callable[[int, int], int],
    name: str = "C",
) -> FinCat:
    """Materialize a category whose composition is computed by ``compose_fn``."""
    src = [a[1] for a in arrows]
    tgt = [a[2] for a in arrows]
    by_src: dict[int, list[int]] = {}
    for k, s in enumerate(src):
        by_src.setdefault(s, []).append(k)
    table = {}
    for f in range(len(arrows)):
        for g in by_src.get(tgt[f], ()):
            table[g, f] = compose_fn(g, f)
    return FinCat(obj_names, arrows, identities, table, name)


# -- functors ---------------------------------------------------------------


class Functor:
    """Object and morphism assignments between two finite categories."""

    def __init__(self, domain: FinCat, codomain: FinCat, on_obj: Sequence[int], on_mor: Sequence[int], name: str = "F"):
        self.domain = domain
        self.codomain = codomain
        self.name = name
        if len(on_obj) != domain.n_objects or len(on_mor) != domain.n_morphisms:
            raise StructureError(f"{name}: object or morphism map is not total")
        for x in on_obj:
            if not 0 <= x < codomain.n_objects:
                raise StructureError(f"{name}: unknown codomain object {x!r}")
        for x in on_mor:
            if not 0 <= x < codomain.n_morphisms:
                raise StructureError(f"{name}: unknown codomain morphism {x!r}")
        self.on_obj = tuple(int(x) for x in on_obj)
        self.on_mor = tuple(int(x) for x in on_mor)

    def __call__(self, f: int) -> int:
        return self.on_mor[f]

    def obj(self, x: int) -> int:
        return self.on_obj[x]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Functor):
            return NotImplemented
        return (
            self.domain == other.domain
            and self.codomain == other.codomain
            and self.on_obj == other.on_obj
            and self.on_mor == other.on_mor
        )

    def __hash__(self) -> int:
        return hash((self.on_obj, self.on_mor))

    def __repr__(self) -> str:
        return f"Functor({self.name!r}: {self.domain.name} -> {self.codomain.name})"

    @classmethod
    def from_names(cls, domain: FinCat, codomain: FinCat, objects: Mapping[str, str], morphisms: Mapping[str, str] | None = None, name="F") -> "Functor":
        """Identities may be omitted from ``morphisms``; they follow the object map."""
        on_obj = [codomain.obj(objects[o]) for o in domain.obj_names]
        morphisms = dict(morphisms or {})
        on_mor = []
        for k, mname in enumerate(domain.mor_names):
            if mname in morphisms:
                on_mor.append(codomain.mor(morphisms[mname]))
            elif domain.is_identity(k):
                on_mor.append(codomain.identity(on_obj[domain.src[k]]))
            else:
                raise StructureError(f"{name}: morphism {mname!r} is not mapped")
        return cls(domain, codomain, on_obj, on_mor, name)

    @classmethod
    def from_object_map(cls, domain: FinCat, codomain: FinCat, on_obj: Sequence[int], name="F") -> "Functor":
        """Functor into a category whose hom-sets are all of size at most 1."""
        on_mor = []
        for k in domain.morphisms:
            hs = codomain.hom(on_obj[domain.src[k]], on_obj[domain.tgt[k]])
            if len(hs) != 1:
                raise StructureError(f"{name}: no unique image for {domain.describe(k)}")
            on_mor.append(hs[0])
        return cls(domain, codomain, on_obj, on_mor, name)


def identity_functor(c: FinCat) -> Functor:
    return Functor(c, c, list(c.objects), list(c.morphisms), name=f"id_{c.name}")


def compose_functors(g: Functor, f: Functor) -> Functor:
    """``g∘f``."""
    if f.codomain != g.domain:
        raise StructureError(f"cannot compose {g.name} after {f.name}")
    return Functor(
        f.domain,
        g.codomain,
        [g.on_obj[x] for x in f.on_obj],
        [g.on_mor[x] for x in f.on_mor],
        name=f"{g.name}.{f.name}",
    )


# -- validation ---------------------------------------------------------------


def validate_category(c: FinCat) -> Verdict:
    """Check totality, endpoints, unit and associativity laws.

    Structural defects are rejected when the :class:`FinCat` is built, so the
    counterexamples here are always law violations.
    """
    T = c.table
    m = c.n_morphisms
    src = np.asarray(c.src, dtype=np.int64)
    tgt = np.asarray(c.tgt, dtype=np.int64)
    for x in c.objects:
        i = c.identities[x]
        if c.src[i] != x or c.tgt[i] != x:
            return Verdict.fail("identity-endpoints", (x, i))
    if m == 0:
        return Verdict.ok()
    composable = src[:, None] == tgt[None, :]  # [g, f]
    missing = np.argwhere(composable & (T < 0))
    if len(missing):
        g, f = map(int, missing[0])
        return Verdict.fail("compose-undefined", (g, f))
    gs, fs = np.nonzero(composable)
    hs = T[gs, fs]
    bad = (src[hs] != src[fs]) | (tgt[hs] != tgt[gs])
    if bad.any():
        k = int(np.argmax(bad))
        return Verdict.fail("composite-endpoints", (int(gs[k]), int(fs[k]), int(hs[k])))
    ident = np.asarray(c.identities, dtype=np.int64)
    ks = np.arange(m)
    left = T[ident[tgt], ks] != ks
    if left.any():
        return Verdict.fail("left-identity", (int(np.argmax(left)),))
    right = T[ks, ident[src]] != ks
    if right.any():
        return Verdict.fail("right-identity", (int(np.argmax(right)),))
    # h∘(g∘f) == (h∘g)∘f over all composable triples, in (h, g, f) order
    safe = np.where(composable, T, 0)
    step = max(1, 2_000_000 // (m * m))
    for h0 in range(0, m, step):
        hsl = slice(h0, min(m, h0 + step))
        lhs = T[hsl][:, safe]  # [h, g, f] -> h∘(g∘f)
        rhs = T[safe[hsl], :]  # [h, g, f] -> (h∘g)∘f
        triple = composable[hsl, :, None] & composable[None, :, :]
        viol = triple & (lhs != rhs)
        if viol.any():
            h, g, f = map(int, np.argwhere(viol)[0])
            return Verdict.fail("associativity", (h + h0, g, f))
    return Verdict.ok()


def validate_functor(F: Functor) -> Verdict:
    C, B = F.domain, F.codomain
    for k in C.morphisms:
        fk = F.on_mor[k]
        if B.src[fk] != F.on_obj[C.src[k]] or B.tgt[fk] != F.on_obj[C.tgt[k]]:
            return Verdict.fail("endpoints", (k,))
    for x in C.objects:
        if F.on_mor[C.identity(x)] != B.identity(F.on_obj[x]):
            return Verdict.fail("identity", (x,))
    for g, f in C.composable_pairs():
        if F.on_mor[C.compose(g, f)] != B.compose(F.on_mor[g], F.on_mor[f]):
            return Verdict.fail("composition", (g, f))
    return Verdict.ok()


def is_isomorphism(c: FinCat, f: int) -> Verdict:
    if not 0 <= f < c.n_morphisms:
        raise StructureError(f"unknown morphism {f!r}")
    s, t = c.src[f], c.tgt[f]
    for g in c.hom(t, s):
        if c.compose(g, f) == c.identity(s) and c.compose(f, g) == c.identity(t):
            return Verdict.ok([("inverse", (g,))])
    return Verdict.fail("no-inverse", (f,))


def inverse(c: FinCat, f: int) -> int:
    v = is_isomorphism(c, f)
    if not v.holds:
        raise ValueError(f"{c.describe(f)} is not invertible")
    return v.witnesses[0][1][0]


def isomorphisms(c: FinCat) -> frozenset[int]:
    return frozenset(f for f in c.morphisms if is_isomorphism(c, f).holds)


def _toggle_op(name: str) -> str:
    return name[:-3] if name.endswith("^op") else name + "^op"


def opposite(c: FinCat) -> FinCat:
    """Same ids and names; endpoints swapped and composition transposed."""
    specs = [(c.mor_names[k], c.tgt[k], c.src[k]) for k in c.morphisms]
    comp = {(f, g): h for (g, f), h in c.compose_entries().items()}
    return FinCat(c.obj_names, specs, c.identities, comp, _toggle_op(c.name))


def opposite_functor(F: Functor, domain: FinCat | None = None, codomain: FinCat | None = None) -> Functor:
    return Functor(
        domain or opposite(F.domain),
        codomain or opposite(F.codomain),
        F.on_obj,
        F.on_mor,
        name=_toggle_op(F.name),
    )


# -- equivalences -------------------------------------------------------------


def is_faithful(F: Functor) -> Verdict:
    C = F.domain
    for a, b in product(C.objects, repeat=2):
        seen: dict[int, int] = {}
        for k in C.hom(a, b):
            img = F.on_mor[k]
            if img in seen:
                return Verdict.fail("not-faithful", (a, b, seen[img], k))
            seen[img] = k
    return Verdict.ok()


def is_full(F: Functor) -> Verdict:
    C, B = F.domain, F.codomain
    for a, b in product(C.objects, repeat=2):
        image = {F.on_mor[k] for k in C.hom(a, b)}
        for j in B.hom(F.on_obj[a], F.on_obj[b]):
            if j not in image:
                return Verdict.fail("not-full", (a, b, j))
    return Verdict.ok()


def is_essentially_surjective(F: Functor) -> Verdict:
    """Witness per codomain object ``b``: ``(b, d, iso: Fd -> b)``."""
    B = F.codomain
    witnesses = []
    for b in B.objects:
        found = None
        for d in F.domain.objects:
            for k in B.hom(F.on_obj[d], b):
                if is_isomorphism(B, k).holds:
                    found = (b, d, k)
                    break
            if found:
                break
        if found is None:
            return Verdict.fail("no-isomorph", (b,))
        witnesses.append(("iso", found))
    return Verdict.ok(witnesses)


def is_equivalence(F: Functor) -> Verdict:
    """Full, faithful and essentially surjective (each part reported)."""
    return Verdict.all_of(
        {
            "faithful": is_faithful(F),
            "full": is_full(F),
            "essentially_surjective": is_essentially_surjective(F),
        }
    )


# -- adjunctions ----------------------------------------------------------------


@dataclass(frozen=True)
class Adjunction:
    """``left: C -> B`` ⊣ ``right: B -> C`` with unit ``c -> GFc`` and counit ``FGb -> b``."""

    left: Functor
    right: Functor
    unit: tuple[int, ...]
    counit: tuple[int, ...]


def verify_adjunction(a: Adjunction) -> Verdict:
    F, G = a.left, a.right
    C, B = F.domain, F.codomain
    if G.domain != B or G.codomain != C:
        raise StructureError("left and right functors are not opposed")
    if len(a.unit) != C.n_objects or len(a.counit) != B.n_objects:
        raise StructureError("unit or counit family is not total")
    GF = compose_functors(G, F)
    FG = compose_functors(F, G)
    for c in C.objects:
        u = a.unit[c]
        if C.src[u] != c or C.tgt[u] != GF.obj(c):
            raise StructureError(f"unit component at {C.obj_names[c]} has wrong endpoints")
    for b in B.objects:
        e = a.counit[b]
        if B.src[e] != FG.obj(b) or B.tgt[e] != b:
            raise StructureError(f"counit component at {B.obj_names[b]} has wrong endpoints")
    parts = {
        "left": validate_functor(F),
        "right": validate_functor(G),
    }
    for k in C.morphisms:
        s, t = C.src[k], C.tgt[k]
        if C.compose(GF(k), a.unit[s]) != C.compose(a.unit[t], k):
            parts["unit-naturality"] = Verdict.fail("unit-naturality", (k,))
            break
    else:
        parts["unit-naturality"] = Verdict.ok()
    for k in B.morphisms:
        s, t = B.src[k], B.tgt[k]
        if B.compose(k, a.counit[s]) != B.compose(a.counit[t], FG(k)):
            parts["counit-naturality"] = Verdict.fail("counit-naturality", (k,))
            break
    else:
        parts["counit-naturality"] = Verdict.ok()
    for c in C.objects:
        if B.compose(a.counit[F.obj(c)], F(a.unit[c])) != B.identity(F.obj(c)):
            parts["triangle-left"] = Verdict.fail("triangle-left", (c,))
            break
    else:
        parts["triangle-left"] = Verdict.ok()
    for b in B.objects:
        if C.compose(G(a.counit[b]), a.unit[G.obj(b)]) != C.identity(G.obj(b)):
            parts["triangle-right"] = Verdict.fail("triangle-right", (b,))
            break
    else:
        parts["triangle-right"] = Verdict.ok()
    return Verdict.all_of(parts)
