"""Comma categories, ``C_d``, ``B_d``, the functor ``F_d`` and the admissibility battery.

Comma categories are materialized as fresh :class:`FinCat` instances.  An
object of a comma category carries a label ``(c, m)`` (the base object and
the structure morphism); a morphism carries ``(i, j, k)``: source and target
comma objects and the underlying base morphism.  Identities come first in
every carrier, in object order.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

from ._unionfind import UnionFind
from .core import FinCat, Functor, StructureError, Verdict, assemble, compose_functors, inverse, is_isomorphism

__all__ = [
    "CommaCat",
    "Subcat",
    "comma_under_F",
    "comma_over",
    "slice_over",
    "C_d",
    "B_d",
    "F_d",
    "is_connected",
    "is_cofiltered",
    "is_initial_functor",
    "has_lifting_property",
    "is_admissible",
    "S_A",
    "S_C",
]


@dataclass(frozen=True, eq=False)
class CommaCat:
    carrier: FinCat
    labels: tuple[tuple[int, int], ...]  # object -> (base object, structure morphism)
    arrows: tuple[tuple[int, int, int], ...]  # morphism -> (i, j, base morphism)
    projection: Functor  # to the category the base objects live in

    def index(self, label: tuple[int, int]) -> int:
        return self._index()[label]

    def _index(self) -> dict:
        cache = self.__dict__.get("_idx")
        if cache is None:
            cache = {lab: i for i, lab in enumerate(self.labels)}
            object.__setattr__(self, "_idx", cache)
        return cache

    def arrow_index(self) -> dict:
        cache = self.__dict__.get("_aidx")
        if cache is None:
            cache = {lab: i for i, lab in enumerate(self.arrows)}
            object.__setattr__(self, "_aidx", cache)
        return cache


def _materialize(
    base: FinCat,
    labels: list[tuple[int, int]],
    is_arrow: Callable[[int, int, int], bool],
    label_name: Callable[[tuple[int, int]], str],
    name: str,
) -> CommaCat:
    """Comma-shaped category over ``base``; morphisms are base morphisms ``k``
    between the label objects for which ``is_arrow(i, j, k)`` holds."""
    arrows = [(i, i, base.identity(labels[i][0])) for i in range(len(labels))]
    for i, (ci, _) in enumerate(labels):
        for j, (cj, _) in enumerate(labels):
            for k in base.hom(ci, cj):
                if (i != j or not base.is_identity(k)) and is_arrow(i, j, k):
                    arrows.append((i, j, k))
    aidx = {a: n for n, a in enumerate(arrows)}

    def comp(g: int, f: int) -> int:
        i, _, kf = arrows[f]
        _, j, kg = arrows[g]
        return aidx[i, j, base.compose(kg, kf)]

    obj_names = [label_name(lab) for lab in labels]
    specs = [(f"id_{obj_names[i]}", i, i) for i in range(len(labels))]
    for i, j, k in arrows[len(labels):]:
        specs.append((f"{base.mor_names[k]}@{obj_names[i]}>{obj_names[j]}", i, j))
    carrier = assemble(obj_names, specs, list(range(len(labels))), comp, name)
    proj = Functor(carrier, base, [lab[0] for lab in labels], [a[2] for a in arrows], name=f"pr_{name}")
    return CommaCat(carrier, tuple(labels), tuple(arrows), proj)


def comma_under_F(F: Functor, b: int) -> CommaCat:
    """``(b↓F)``: objects ``(c, β: b -> Fc)``, morphisms ``ψ`` with ``Fψ∘β1 = β2``."""
    C, B = F.domain, F.codomain
    if not 0 <= b < B.n_objects:
        raise StructureError(f"unknown object {b!r}")
    labels = [(c, beta) for c in C.objects for beta in B.hom(b, F.obj(c))]

    def is_arrow(i, j, k):
        return B.compose(F(k), labels[i][1]) == labels[j][1]

    def lname(lab):
        return f"<{C.obj_names[lab[0]]},{B.mor_names[lab[1]]}>"

    return _materialize(C, labels, is_arrow, lname, f"({B.obj_names[b]}|{F.name})")


def comma_over(L: Functor, k: int) -> CommaCat:
    """``(L↓k)``: objects ``(j, κ: Lj -> k)``, morphisms ``m`` with ``κ2∘Lm = κ1``."""
    J1, J = L.domain, L.codomain
    labels = [(j, kappa) for j in J1.objects for kappa in J.hom(L.obj(j), k)]

    def is_arrow(i, j, m):
        return J.compose(labels[j][1], L(m)) == labels[i][1]

    def lname(lab):
        return f"<{J1.obj_names[lab[0]]},{J.mor_names[lab[1]]}>"

    return _materialize(J1, labels, is_arrow, lname, f"({L.name}|{J.obj_names[k]})")


def slice_over(c: FinCat, d: int, keep: Callable[[int], bool] = lambda phi: True, name=None) -> CommaCat:
    """Full subcategory of ``(C↓d)`` on the ``⟨e, φ⟩`` with ``keep(φ)``."""
    labels = [(e, phi) for e in c.objects for phi in c.hom(e, d) if keep(phi)]

    def is_arrow(i, j, k):
        return c.compose(labels[j][1], k) == labels[i][1]

    def lname(lab):
        return f"<{c.obj_names[lab[0]]},{c.mor_names[lab[1]]}>"

    return _materialize(c, labels, is_arrow, lname, name or f"({c.name}|{c.obj_names[d]})")


def C_d(F: Functor, d: int) -> CommaCat:
    """Objects ``⟨e, φ: e -> d⟩`` of ``(C↓d)`` with ``Fφ`` invertible."""
    C = F.domain
    if not 0 <= d < C.n_objects:
        raise StructureError(f"unknown object {d!r}")
    return slice_over(
        C, d, lambda phi: is_isomorphism(F.codomain, F(phi)).holds, name=f"C_{C.obj_names[d]}"
    )


def B_d(F: Functor, d: int) -> CommaCat:
    """``(Fd↓F)``."""
    if not 0 <= d < F.domain.n_objects:
        raise StructureError(f"unknown object {d!r}")
    return comma_under_F(F, F.obj(d))


def F_d(F: Functor, d: int, cd: CommaCat | None = None, bd: CommaCat | None = None) -> Functor:
    """``⟨e, φ⟩ ↦ ⟨e, (Fφ)^-1⟩`` and ``ψ ↦ ψ``."""
    cd = cd or C_d(F, d)
    bd = bd or B_d(F, d)
    B = F.codomain
    on_obj = [bd.index((e, inverse(B, F(phi)))) for e, phi in cd.labels]
    aidx = bd.arrow_index()
    on_mor = [aidx[on_obj[i], on_obj[j], k] for i, j, k in cd.arrows]
    return Functor(cd.carrier, bd.carrier, on_obj, on_mor, name=f"F_{F.domain.obj_names[d]}")


# -- subcategories --------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Subcat:
    """A (not necessarily full) subcategory of a comma category's carrier."""

    parent: CommaCat
    objects: frozenset[int]
    morphisms: frozenset[int]

    @classmethod
    def full(cls, parent: CommaCat, objects: Iterable[int]) -> "Subcat":
        objs = frozenset(objects)
        car = parent.carrier
        mors = frozenset(k for k in car.morphisms if car.src[k] in objs and car.tgt[k] in objs)
        return cls(parent, objs, mors)

    @classmethod
    def whole(cls, parent: CommaCat) -> "Subcat":
        return cls.full(parent, parent.carrier.objects)

    def check(self) -> Verdict:
        car = self.parent.carrier
        for k in sorted(self.morphisms):
            if car.src[k] not in self.objects or car.tgt[k] not in self.objects:
                return Verdict.fail("endpoint-outside", (k,))
        for x in sorted(self.objects):
            if car.identity(x) not in self.morphisms:
                return Verdict.fail("identity-missing", (x,))
        for g in sorted(self.morphisms):
            for f in sorted(self.morphisms):
                if car.tgt[f] == car.src[g] and car.compose(g, f) not in self.morphisms:
                    return Verdict.fail("not-closed", (g, f))
        return Verdict.ok()

    def category(self) -> tuple[FinCat, Functor]:
        """The subcategory as a :class:`FinCat` and its inclusion into the parent."""
        car = self.parent.carrier
        objs = sorted(self.objects)
        oidx = {x: n for n, x in enumerate(objs)}
        mors = [car.identity(x) for x in objs]
        mors += sorted(self.morphisms - set(mors))
        midx = {k: n for n, k in enumerate(mors)}
        specs = [(car.mor_names[k], oidx[car.src[k]], oidx[car.tgt[k]]) for k in mors]
        sub = assemble(
            [car.obj_names[x] for x in objs],
            specs,
            list(range(len(objs))),
            lambda g, f: midx[car.compose(mors[g], mors[f])],
            name=f"A<{car.name}",
        )
        return sub, Functor(sub, car, objs, mors, name="incl")

    def base_morphisms(self) -> frozenset[int]:
        """The structure morphisms ``φ`` of the objects ``⟨e, φ⟩``."""
        return frozenset(self.parent.labels[x][1] for x in self.objects)


# -- connectivity and filteredness --------------------------------------------


def is_connected(j: FinCat) -> Verdict:
    if j.n_objects == 0:
        return Verdict.fail("empty", ())
    uf = UnionFind(j.n_objects)
    for k in j.morphisms:
        uf.union(j.src[k], j.tgt[k])
    for x in j.objects:
        if uf.find(x) != uf.find(0):
            return Verdict.fail("disconnected", (0, x))
    return Verdict.ok()


def is_cofiltered(j: FinCat) -> Verdict:
    """Non-empty, common sources for pairs of objects, and parallel pairs
    equalized by precomposition (identities allowed as ``w``)."""
    if j.n_objects == 0:
        return Verdict.fail("empty", ())
    n = j.n_objects
    witnesses = []
    for a in range(n):
        for b in range(a, n):
            span = None
            for i in j.objects:
                ha, hb = j.hom(i, a), j.hom(i, b)
                if ha and hb:
                    span = (i, ha[0], hb[0])
                    break
            if span is None:
                return Verdict.fail("no-span", (a, b))
            witnesses.append(("span", (a, b, *span)))
    for a in j.objects:
        for b in j.objects:
            hs = j.hom(a, b)
            for u in hs:
                for v in hs:
                    if u >= v:
                        continue
                    found = None
                    for i in j.objects:
                        for w in j.hom(i, a):
                            if j.compose(u, w) == j.compose(v, w):
                                found = (i, w)
                                break
                        if found:
                            break
                    if found is None:
                        return Verdict.fail("not-equalized", (u, v))
                    witnesses.append(("equalize", (u, v, *found)))
    return Verdict.ok(witnesses)


def is_initial_functor(L: Functor) -> Verdict:
    """Every ``(L↓k)`` is non-empty and connected."""
    for k in L.codomain.objects:
        v = is_connected(comma_over(L, k).carrier)
        if not v.holds:
            return Verdict.fail("comma-" + v.counterexample[0], (k,))
    return Verdict.ok()


# -- lifting and admissibility -----------------------------------------------


def _check_parent(F: Functor, d: int, a: Subcat) -> None:
    ref = C_d(F, d)
    if a.parent.labels != ref.labels or a.parent.carrier != ref.carrier:
        raise StructureError(f"subcategory is not taken in C_{F.domain.obj_names[d]}")
    v = a.check()
    if not v.holds:
        raise StructureError(f"not a subcategory: {v.counterexample}")


def has_lifting_property(F: Functor, d: int, a: Subcat, *, checked: bool = False) -> Verdict:
    """Every ``⟨e, δ⟩`` of ``B_d`` lifts: ``δ∘Fφ = Fψ`` with ``⟨e', φ⟩`` in ``a``.

    Witnesses are ``(e, δ, φ, ψ)`` per object of ``B_d``.
    """
    if not checked:
        _check_parent(F, d, a)
    C, B = F.domain, F.codomain
    if not a.objects:
        return Verdict.fail("empty", (d,))
    objs = [a.parent.labels[x] for x in sorted(a.objects)]
    fd = F.obj(d)
    witnesses = []
    for e in C.objects:
        for delta in B.hom(fd, F.obj(e)):
            lift = None
            for e1, phi in objs:
                target = B.compose(delta, F(phi))
                for psi in C.hom(e1, e):
                    if F(psi) == target:
                        lift = (e, delta, phi, psi)
                        break
                if lift:
                    break
            if lift is None:
                return Verdict.fail("no-lift", (d, e, delta))
            witnesses.append(("lift", lift))
    return Verdict.ok(witnesses)


def is_admissible(F: Functor, d: int, a: Subcat) -> Verdict:
    """Non-empty, cofiltered, and ``F`` has the ``a``-lifting property."""
    _check_parent(F, d, a)
    if not a.objects:
        return Verdict.fail("empty", (d,))
    sub, _ = a.category()
    return Verdict.all_of(
        {
            "cofiltered": is_cofiltered(sub),
            "lifting": has_lifting_property(F, d, a, checked=True),
        }
    )


def restricted_F_d(F: Functor, d: int, a: Subcat) -> Functor:
    """``F_d`` restricted along the inclusion of ``a``."""
    _, incl = a.category()
    return compose_functors(F_d(F, d, cd=a.parent), incl)


def S_A(F: Functor, choice: Mapping[int, Subcat]) -> frozenset[int]:
    out: set[int] = set()
    for d, a in choice.items():
        out |= a.base_morphisms()
    return frozenset(out)


def S_C(F: Functor) -> frozenset[int]:
    """Morphisms of the domain sent to isomorphisms."""
    B = F.codomain
    return frozenset(k for k in F.domain.morphisms if is_isomorphism(B, F(k)).holds)
