"""Set-valued presheaves on finite categories and the left Kan extension along a functor.

Values are finite sets ``{0, ..., n-1}``; ``action[k]`` is the function
``X(tgt k) -> X(src k)`` stored as a tuple.  ``left_kan`` computes

    F_*X(b) = colim over (b↓F)^op of X(c)

as a quotient of a disjoint union.  This is the 0-truncated shadow of the
simplicial statements: weak equivalences become bijections.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

from ._unionfind import UnionFind
from .comma import CommaCat, comma_under_F
from .core import FinCat, Functor, StructureError, Verdict

__all__ = [
    "Presheaf",
    "NatTrans",
    "ColimitSet",
    "KanExtension",
    "representable",
    "constant",
    "restrict",
    "colimit_set",
    "colimit_universality",
    "left_kan",
    "counit",
    "unit",
    "kan_of_representable",
    "is_natural_iso",
    "validate_presheaf",
    "validate_nattrans",
]


@dataclass(frozen=True, eq=False)
class Presheaf:
    base: FinCat
    sizes: tuple[int, ...]
    action: tuple[tuple[int, ...], ...]
    labels: tuple[tuple[str, ...], ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        c = self.base
        if len(self.sizes) != c.n_objects or len(self.action) != c.n_morphisms:
            raise StructureError("presheaf tables are not total")
        for k in c.morphisms:
            fn = self.action[k]
            if len(fn) != self.sizes[c.tgt[k]]:
                raise StructureError(f"action of {c.mor_names[k]} has the wrong domain")
            if any(not 0 <= v < self.sizes[c.src[k]] for v in fn):
                raise StructureError(f"action of {c.mor_names[k]} leaves its codomain")

    def __call__(self, k: int) -> tuple[int, ...]:
        return self.action[k]

    def __eq__(self, other):
        if not isinstance(other, Presheaf):
            return NotImplemented
        return self.base == other.base and self.sizes == other.sizes and self.action == other.action

    def __hash__(self):
        return hash((self.sizes, self.action))

    def element_names(self, x: int) -> tuple[str, ...]:
        if self.labels is not None:
            return self.labels[x]
        return tuple(str(v) for v in range(self.sizes[x]))

    @classmethod
    def from_functions(cls, base: FinCat, sizes: Sequence[int], action: dict[int, Sequence[int]], labels=None):
        """Identity actions may be omitted."""
        acts = []
        for k in base.morphisms:
            if k in action:
                acts.append(tuple(action[k]))
            elif base.is_identity(k):
                acts.append(tuple(range(sizes[base.src[k]])))
            else:
                raise StructureError(f"no action given for {base.mor_names[k]}")
        return cls(base, tuple(sizes), tuple(acts), labels)


def validate_presheaf(x: Presheaf) -> Verdict:
    c = x.base
    for i in c.objects:
        if x.action[c.identity(i)] != tuple(range(x.sizes[i])):
            return Verdict.fail("identity", (i,))
    for g, f in c.composable_pairs():
        h = c.compose(g, f)
        xg, xf = x.action[g], x.action[f]
        if x.action[h] != tuple(xf[v] for v in xg):
            return Verdict.fail("composition", (g, f))
    return Verdict.ok()


@dataclass(frozen=True, eq=False)
class NatTrans:
    source: Presheaf
    target: Presheaf
    components: tuple[tuple[int, ...], ...]


def validate_nattrans(t: NatTrans) -> Verdict:
    c = t.source.base
    for k in c.morphisms:
        s, d = c.src[k], c.tgt[k]
        # t_s ∘ X(k) == Y(k) ∘ t_d on X(d)
        for v in range(t.source.sizes[d]):
            if t.components[s][t.source.action[k][v]] != t.target.action[k][t.components[d][v]]:
                return Verdict.fail("naturality", (k, v))
    return Verdict.ok()


def is_natural_iso(t: NatTrans) -> Verdict:
    for x, comp in enumerate(t.components):
        n = t.target.sizes[x]
        if len(set(comp)) != len(comp):
            return Verdict.fail("non-injective", (x,))
        if len(comp) != n:
            return Verdict.fail("non-surjective", (x,))
    return Verdict.ok()


def representable(c: FinCat, d: int) -> Presheaf:
    """``hom(-, d)``; elements of ``X(x)`` are the morphisms of ``hom(x, d)`` in order."""
    homs = [c.hom(x, d) for x in c.objects]
    pos = [{m: i for i, m in enumerate(h)} for h in homs]
    action = []
    for k in c.morphisms:
        s, t = c.src[k], c.tgt[k]
        action.append(tuple(pos[s][c.compose(m, k)] for m in homs[t]))
    labels = tuple(tuple(c.mor_names[m] for m in h) for h in homs)
    return Presheaf(c, tuple(len(h) for h in homs), tuple(action), labels)


def constant(c: FinCat, n: int) -> Presheaf:
    return Presheaf(c, (n,) * c.n_objects, (tuple(range(n)),) * c.n_morphisms)


def restrict(F: Functor, y: Presheaf) -> Presheaf:
    """``Y∘F``."""
    if y.base != F.codomain:
        raise StructureError("presheaf does not live on the codomain")
    labels = None if y.labels is None else tuple(y.labels[F.obj(x)] for x in F.domain.objects)
    return Presheaf(
        F.domain,
        tuple(y.sizes[F.obj(x)] for x in F.domain.objects),
        tuple(y.action[F(k)] for k in F.domain.morphisms),
        labels,
    )


# -- colimits ---------------------------------------------------------------


@dataclass(frozen=True)
class ColimitSet:
    """Quotient of the disjoint union of the node sets.

    ``elements[i]`` is the lexicographically least ``(node, element)`` of class
    ``i``; ``coprojections[j][v]`` is the class of ``(j, v)``.
    """

    elements: tuple[tuple[int, int], ...]
    coprojections: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.elements)


def colimit_set(z: Presheaf) -> ColimitSet:
    """Colimit over ``J^op`` of a presheaf ``z`` on ``J``.

    Every ``m: j -> j'`` identifies ``(j', v)`` with ``(j, z(m)(v))``.
    """
    j = z.base
    offsets = [0]
    for s in z.sizes:
        offsets.append(offsets[-1] + s)
    uf = UnionFind(offsets[-1])
    for k in j.morphisms:
        if j.is_identity(k):
            continue
        s, t = j.src[k], j.tgt[k]
        fn = z.action[k]
        os_, ot = offsets[s], offsets[t]
        for v in range(z.sizes[t]):
            uf.union(ot + v, os_ + fn[v])
    roots = sorted({uf.find(i) for i in range(offsets[-1])})
    rank = {r: n for n, r in enumerate(roots)}
    node_of = []
    for node, s in enumerate(z.sizes):
        node_of += [(node, v) for v in range(s)]
    elements = tuple(node_of[r] for r in roots)
    cop = tuple(
        tuple(rank[uf.find(offsets[node] + v)] for v in range(z.sizes[node])) for node in j.objects
    )
    return ColimitSet(elements, cop)


def colimit_universality(z: Presheaf, colim: ColimitSet, target_size: int) -> Verdict:
    """Every cocone into a set of ``target_size`` elements factors uniquely."""
    j = z.base
    nodes = [x for x in j.objects]
    count = 0
    # enumerate cocones node by node, checking compatibility as we go
    legs: list[tuple[int, ...] | None] = [None] * len(nodes)

    def compatible(upto: int) -> bool:
        for k in j.morphisms:
            s, t = j.src[k], j.tgt[k]
            if s > upto or t > upto:
                continue
            fn = z.action[k]
            if any(legs[t][v] != legs[s][fn[v]] for v in range(z.sizes[t])):
                return False
        return True

    def rec(i: int):
        nonlocal count
        if i == len(nodes):
            med = [
                m
                for m in product(range(target_size), repeat=colim.size)
                if all(
                    m[colim.coprojections[x][v]] == legs[x][v]
                    for x in nodes
                    for v in range(z.sizes[x])
                )
            ]
            count += 1
            return None if len(med) == 1 else ("mediators", (count, len(med)))
        for leg in product(range(target_size), repeat=z.sizes[i]):
            legs[i] = leg
            if compatible(i):
                bad = rec(i + 1)
                if bad:
                    return bad
        legs[i] = None
        return None

    bad = rec(0)
    if bad:
        return Verdict.fail(*bad)
    return Verdict.ok([("cocones", (count,))])


# -- Kan extension ------------------------------------------------------------


class KanExtension:
    """Caches the comma categories ``(b↓F)`` of a functor for repeated use."""

    def __init__(self, F: Functor):
        self.F = F
        B = F.codomain
        self.commas: list[CommaCat] = [comma_under_F(F, b) for b in B.objects]
        self._reindex: dict[int, tuple[int, ...]] = {}

    def reindex(self, beta: int) -> tuple[int, ...]:
        """For ``β: b -> b'``: node ``⟨c, γ⟩`` of ``(b'↓F)`` goes to ``⟨c, γ∘β⟩`` of ``(b↓F)``."""
        if beta not in self._reindex:
            B = self.F.codomain
            b = B.src[beta]
            src_comma = self.commas[B.tgt[beta]]
            tgt_comma = self.commas[b]
            self._reindex[beta] = tuple(
                tgt_comma.index((c, B.compose(g, beta))) for c, g in src_comma.labels
            )
        return self._reindex[beta]

    def diagram(self, x: Presheaf, b: int) -> Presheaf:
        """``X∘P`` as a presheaf on ``(b↓F)``."""
        cm = self.commas[b]
        return Presheaf(
            cm.carrier,
            tuple(x.sizes[c] for c, _ in cm.labels),
            tuple(x.action[k] for _, _, k in cm.arrows),
        )

    def colimits(self, x: Presheaf) -> list[ColimitSet]:
        if x.base != self.F.domain:
            raise StructureError("presheaf does not live on the domain")
        return [colimit_set(self.diagram(x, b)) for b in self.F.codomain.objects]

    def extend(self, x: Presheaf, colims: list[ColimitSet] | None = None) -> Presheaf:
        B = self.F.codomain
        colims = colims or self.colimits(x)
        action = []
        for beta in B.morphisms:
            b, b1 = B.src[beta], B.tgt[beta]
            nodes = self.reindex(beta)
            src_cm, tgt_cm = colims[b1], colims[b]
            action.append(
                tuple(tgt_cm.coprojections[nodes[node]][v] for node, v in src_cm.elements)
            )
        labels = []
        for b in B.objects:
            cm = self.commas[b]
            C = self.F.domain
            names = []
            for node, v in colims[b].elements:
                c, g = cm.labels[node]
                names.append(f"[{C.obj_names[c]},{B.mor_names[g]},{x.element_names(c)[v]}]")
            labels.append(tuple(names))
        return Presheaf(B, tuple(cm.size for cm in colims), tuple(action), tuple(labels))

    def counit(self, y: Presheaf) -> NatTrans:
        F = self.F
        B = F.codomain
        fy = restrict(F, y)
        colims = self.colimits(fy)
        ext = self.extend(fy, colims)
        comps = []
        for b in B.objects:
            cm = self.commas[b]
            comps.append(tuple(y.action[cm.labels[node][1]][v] for node, v in colims[b].elements))
        return NatTrans(ext, y, tuple(comps))

    def counit_components(self, y: Presheaf) -> list[tuple[int, ...]]:
        """Counit components alone, skipping the action of the extension."""
        F = self.F
        out = []
        for b in F.codomain.objects:
            cm = self.commas[b]
            sizes = [y.sizes[F.obj(c)] for c, _ in cm.labels]
            col = colimit_set(
                Presheaf(cm.carrier, tuple(sizes), tuple(y.action[F(k)] for _, _, k in cm.arrows))
            )
            out.append(tuple(y.action[cm.labels[node][1]][v] for node, v in col.elements))
        return out

    def unit_components(self, x: Presheaf) -> tuple[list[tuple[int, ...]], list[int]]:
        """Unit components and the sizes of ``F_*X``; at ``d`` the coprojection at ``⟨d, id_Fd⟩``."""
        F = self.F
        B = F.codomain
        colims = self.colimits(x)
        out = []
        for d in F.domain.objects:
            fd = F.obj(d)
            out.append(colims[fd].coprojections[self.commas[fd].index((d, B.identity(fd)))])
        return out, [cm.size for cm in colims]

    def unit(self, x: Presheaf) -> NatTrans:
        F = self.F
        B = F.codomain
        colims = self.colimits(x)
        ext = self.extend(x, colims)
        comps = []
        for d in F.domain.objects:
            fd = F.obj(d)
            node = self.commas[fd].index((d, B.identity(fd)))
            comps.append(colims[fd].coprojections[node])
        return NatTrans(x, restrict(F, ext), tuple(comps))


def left_kan(F: Functor, x: Presheaf) -> Presheaf:
    return KanExtension(F).extend(x)


def counit(F: Functor, y: Presheaf) -> NatTrans:
    """``F_*F^*Y -> Y``; the class of ``(⟨c, β⟩, v)`` goes to ``Y(β)(v)``."""
    return KanExtension(F).counit(y)


def unit(F: Functor, x: Presheaf) -> NatTrans:
    """``X -> F^*F_*X``; at ``d`` the coprojection at node ``⟨d, id_Fd⟩``."""
    return KanExtension(F).unit(x)


def kan_of_representable(F: Functor, y: int, kan: KanExtension | None = None) -> NatTrans:
    """``F_* hom(-, y) -> hom(-, Fy)``, ``[⟨c, β⟩, v] ↦ Fv∘β``."""
    kan = kan or KanExtension(F)
    C, B = F.domain, F.codomain
    ry = representable(C, y)
    colims = kan.colimits(ry)
    ext = kan.extend(ry, colims)
    target = representable(B, F.obj(y))
    comps = []
    for b in B.objects:
        cm = kan.commas[b]
        pos = {m: i for i, m in enumerate(B.hom(b, F.obj(y)))}
        row = []
        for node, v in colims[b].elements:
            c, beta = cm.labels[node]
            phi = C.hom(c, y)[v]
            row.append(pos[B.compose(F(phi), beta)])
        comps.append(tuple(row))
    return NatTrans(ext, target, tuple(comps))
