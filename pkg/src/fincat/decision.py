"""Deciding whether a functor generates a homotopical presentation.

Under the standing hypotheses (the domain has finite limits and ``F``
preserves them) the homotopical statement is equivalent to a finite
1-categorical one: ``F`` is essentially surjective and has the
``C_d``-lifting property for every ``d`` (relation ``S_C``).  With an
explicit choice of admissible ``A_d`` it suffices, relation ``S_A``.
Nothing here builds a model structure; reports name the route used.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator, Mapping

import numpy as np

from .comma import C_d, S_A, S_C, Subcat, has_lifting_property, is_admissible
from .core import (
    Adjunction,
    FinCat,
    Functor,
    StructureError,
    Verdict,
    is_equivalence,
    is_essentially_surjective,
    is_faithful,
    is_full,
    isomorphisms,
    validate_functor,
    verify_adjunction,
)
from ._batch import TableBatch, counit_bijective, enumerate_batch, unit_bijective
from .enumerate import sample_presheaves
from .fractions import A_sigma, check_right_fractions, induced_functor, localize
from .limits import has_finite_limits, preserves_finite_limits
from .presheaf import KanExtension, Presheaf, is_natural_iso, kan_of_representable

__all__ = [
    "PRESENTATION",
    "HYPOTHESES_NOT_MET",
    "CRITERION_FAILS",
    "HypothesesNotMet",
    "PresentationReport",
    "check_presentation",
    "check_universal_equivalence",
    "check_presentation_via_adjunction",
    "cross_validate",
    "oracle_battery",
    "retract_data",
    "right_fraction_subsets",
]

PRESENTATION = "presentation"
HYPOTHESES_NOT_MET = "hypotheses-not-met"
CRITERION_FAILS = "criterion-fails"


class HypothesesNotMet(StructureError):
    """The domain lacks finite limits or the functor does not preserve them."""


# What each position of a counterexample or witness refers to:
# c/C = object/morphism of the domain, b/B = object/morphism of the codomain.
_KINDS = {
    "no-terminal": "",
    "no-product": "cc",
    "no-equalizer": "CC",
    "terminal-not-preserved": "c",
    "product-not-preserved": "cc",
    "equalizer-not-preserved": "CC",
    "no-isomorph": "b",
    "iso": "bcB",
    "retract": "bcBB",
    "no-lift": "ccB",
    "lift": "cBCC",
    "empty": "c",
    "not-full": "ccB",
    "not-faithful": "ccCC",
    "RF1-identity": "c",
    "RF1-composition": "CC",
    "RF2-ore": "CC",
    "RF3-cancel": "CCC",
    "hom-not-bijective": "cc",
    "counit-not-bijective": "_b",
    "unit-not-bijective": "_c",
    "kan-representable": "c",
    "upgrade-fails": "_",
    "not-right-fractions": "",
    "unit-naturality": "C",
    "counit-naturality": "B",
    "triangle-left": "c",
    "triangle-right": "b",
}


@dataclass
class PresentationReport:
    """Sub-verdicts of the criterion and the conclusion drawn from them.

    ``hypotheses`` maps a check name to its verdict, or to ``None`` when it
    could not be run (preservation is undefined without finite limits).
    """

    functor: Functor
    hypotheses: dict[str, Verdict | None]
    essential_surjectivity: Verdict
    lifting: dict[int, Verdict]
    relation_name: str
    relation: frozenset[int]
    conclusion: str
    admissibility: dict[int, Verdict] | None = None
    extra: dict[str, Verdict] = field(default_factory=dict)
    oracle: dict[str, Verdict] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    title: str = "presentation check"

    @property
    def holds(self) -> bool:
        return self.conclusion == PRESENTATION

    def counterexamples(self) -> list[tuple[str, tuple]]:
        """Every counterexample carried by a failing sub-verdict, in report order."""
        out = []
        for v in self._verdicts():
            if v is not None and not v.holds and v.counterexample is not None:
                out.append(v.counterexample)
        return out

    def _verdicts(self):
        yield from self.hypotheses.values()
        yield self.essential_surjectivity
        yield from (self.admissibility or {}).values()
        yield from self.lifting.values()
        yield from self.extra.values()

    # -- rendering ----------------------------------------------------------

    def _name(self, kind: str, i) -> str:
        F = self.functor
        C, B = F.domain, F.codomain
        table = {"c": C.obj_names, "C": C.mor_names, "b": B.obj_names, "B": B.mor_names}.get(kind)
        if table is None or not isinstance(i, int) or not 0 <= i < len(table):
            return str(i)
        return table[i]

    def _datum(self, pair) -> dict:
        label, data = pair
        kinds = _KINDS.get(label, "")
        names = [self._name(kinds[n] if n < len(kinds) else "_", x) for n, x in enumerate(data)]
        return {"label": label, "data": names}

    def _fmt(self, pair) -> str:
        d = self._datum(pair)
        return f"{d['label']}({', '.join(d['data'])})"

    def _verdict_line(self, v: Verdict | None) -> str:
        if v is None:
            return "not-checked"
        if v.holds:
            return "holds"
        return "fails " + self._fmt(v.counterexample)

    def _verdict_json(self, v: Verdict | None):
        if v is None:
            return None
        return {
            "holds": v.holds,
            "counterexample": None if v.counterexample is None else self._datum(v.counterexample),
            "witnesses": [self._datum(w) for w in v.witnesses],
        }

    def relation_names(self) -> list[str]:
        return [self.functor.domain.mor_names[k] for k in sorted(self.relation)]

    def to_text(self) -> str:
        F = self.functor
        C, B = F.domain, F.codomain
        lines = [
            f"report: {self.title}",
            f"functor: {F.name}: {C.name} -> {B.name}",
            f"conclusion: {self.conclusion}",
            f"relation: {self.relation_name} = {{{', '.join(self.relation_names())}}}",
            "[hypotheses]",
        ]
        lines += [f"{k}: {self._verdict_line(v)}" for k, v in self.hypotheses.items()]
        es = self.essential_surjectivity
        lines.append("[essential-surjectivity]")
        lines.append(self._verdict_line(es))
        lines += ["  " + self._fmt(w) for w in es.witnesses]
        if self.admissibility is not None:
            lines.append("[admissibility]")
            for d, v in self.admissibility.items():
                lines.append(f"d={C.obj_names[d]}: {self._verdict_line(v)}")
        lines.append("[lifting]")
        for d, v in self.lifting.items():
            lines.append(f"d={C.obj_names[d]}: {self._verdict_line(v)}")
            lines += ["  " + self._fmt(w) for w in v.witnesses]
        if self.extra:
            lines.append("[checks]")
            lines += [f"{k}: {self._verdict_line(v)}" for k, v in self.extra.items()]
        if self.oracle:
            lines.append("[oracle]")
            for k, v in self.oracle.items():
                lines.append(f"{k}: {self._verdict_line(v)}")
                lines += ["  " + self._fmt(w) for w in v.witnesses]
        if self.notes:
            lines.append("[notes]")
            lines += [f"- {n}" for n in self.notes]
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        F = self.functor
        C = F.domain
        return {
            "report": self.title,
            "functor": F.name,
            "domain": C.name,
            "codomain": F.codomain.name,
            "conclusion": self.conclusion,
            "relation": {"name": self.relation_name, "morphisms": self.relation_names()},
            "hypotheses": {k: self._verdict_json(v) for k, v in self.hypotheses.items()},
            "essential_surjectivity": self._verdict_json(self.essential_surjectivity),
            "admissibility": None
            if self.admissibility is None
            else {C.obj_names[d]: self._verdict_json(v) for d, v in self.admissibility.items()},
            "lifting": {C.obj_names[d]: self._verdict_json(v) for d, v in self.lifting.items()},
            "checks": {k: self._verdict_json(v) for k, v in self.extra.items()},
            "oracle": {k: self._verdict_json(v) for k, v in self.oracle.items()},
            "notes": list(self.notes),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"


# -- helpers ------------------------------------------------------------------


def retract_data(F: Functor, b: int) -> tuple[int, int, int, int] | None:
    """First ``(b, d, α, β)`` with ``α: b -> Fd``, ``β: Fd -> b`` and ``β∘α = id_b``.

    Then ``α∘β`` is an idempotent on ``Fd`` split by ``b``.
    """
    B = F.codomain
    ib = B.identity(b)
    for d in F.domain.objects:
        fd = F.obj(d)
        for alpha in B.hom(b, fd):
            for beta in B.hom(fd, b):
                if B.compose(beta, alpha) == ib:
                    return b, d, alpha, beta
    return None


def _hypotheses(F: Functor) -> dict[str, Verdict | None]:
    lim = has_finite_limits(F.domain)
    return {
        "finite-limits": lim,
        "preserves-finite-limits": preserves_finite_limits(F) if lim.holds else None,
    }


def _hypotheses_hold(h: Mapping[str, Verdict | None]) -> bool:
    return all(v is not None and v.holds for v in h.values())


def _essential_surjectivity(F: Functor) -> tuple[Verdict, list[str]]:
    es = is_essentially_surjective(F)
    notes = []
    if not es.holds:
        b = es.counterexample[1][0]
        r = retract_data(F, b)
        if r is not None:
            B = F.codomain
            es = Verdict(False, (("retract", r),), es.counterexample)
            notes.append(
                f"{B.obj_names[b]} is a retract of F({F.domain.obj_names[r[1]]}) through the split "
                f"idempotent {B.mor_names[r[2]]}∘{B.mor_names[r[3]]} but not isomorphic to any F(d)"
            )
    return es, notes


def _bijective(comp: tuple[int, ...], n: int) -> str | None:
    if len(set(comp)) != len(comp):
        return "non-injective"
    if len(comp) != n:
        return "non-surjective"
    return None


# -- oracle -------------------------------------------------------------------


_BATCHES: dict = {}


def _exhaustive(c: FinCat, max_size: int, inverting) -> TableBatch:
    """Cached batch of all probes up to ``max_size`` inverting the given morphisms."""
    inv = frozenset(k for k in inverting if not c.is_identity(k))
    key = (id(c), max_size, inv)
    hit = _BATCHES.get(key)
    if hit is None or hit[0] is not c:
        if len(_BATCHES) > 32:
            _BATCHES.clear()
        hit = _BATCHES[key] = (c, enumerate_batch(c, max_size, inverting=inv))
    return hit[1]


def _sampled(c: FinCat, seed: int, exhaustive: int, sample_size: int, samples: int, inverting=()) -> list[Presheaf]:
    """Seeded probes with some value larger than ``exhaustive``."""
    if not samples or sample_size <= exhaustive:
        return []
    rng = random.Random(seed)
    seen: set = set()
    out = []
    for p in sample_presheaves(c, sample_size, samples, rng, inverting=inverting):
        if max(p.sizes, default=0) > exhaustive and p not in seen:
            seen.add(p)
            out.append(p)
    return out


def _probes(c: FinCat, seed: int, exhaustive: int, sample_size: int, samples: int, inverting=()) -> list[Presheaf]:
    batch = _exhaustive(c, exhaustive, inverting)
    probes = [batch.presheaf(p) for p in range(len(batch))]
    return probes + _sampled(c, seed, exhaustive, sample_size, samples, inverting)


def _first_false(mask: np.ndarray) -> tuple[int, int] | None:
    bad = np.argwhere(~mask)
    return None if len(bad) == 0 else (int(bad[0][0]), int(bad[0][1]))


def oracle_battery(
    F: Functor,
    relation=None,
    *,
    seed: int = 0,
    exhaustive: int = 2,
    sample_size: int = 3,
    samples: int = 20,
    kan: KanExtension | None = None,
) -> dict[str, Verdict]:
    """Set-level checks through the left Kan extension.

    ``counit``: ``F_*F^*Y -> Y`` is bijective for every probe ``Y`` on the
    codomain.  ``unit``: ``X -> F^*F_*X`` is bijective for every probe ``X``
    inverting ``relation`` (skipped when ``relation`` is ``None``).
    ``kan-representables``: ``F_* hom(-, y) ≅ hom(-, Fy)``.
    Probes are all presheaves with values of size ``<= exhaustive`` (checked
    in one vectorized batch) plus a seeded sample with values of size
    ``<= sample_size`` (checked one at a time through ``kan``).  Probe
    indices in counterexamples count the exhaustive family first.
    """
    kan = kan or KanExtension(F)
    C, B = F.domain, F.codomain
    out: dict[str, Verdict] = {}

    tabs = _exhaustive(B, exhaustive, ())
    bad = _first_false(counit_bijective(kan, tabs)) if len(tabs) else None
    ys = _sampled(B, seed, exhaustive, sample_size, samples)
    if bad is None:
        for n, y in enumerate(ys):
            b = next((b for b, comp in enumerate(kan.counit_components(y)) if _bijective(comp, y.sizes[b])), None)
            if b is not None:
                bad = (len(tabs) + n, b)
                break
    total = len(tabs) + len(ys)
    out["counit"] = Verdict.fail("counit-not-bijective", bad) if bad else Verdict.ok([("probes", (total,))])

    if relation is not None:
        tabs = _exhaustive(C, exhaustive, relation)
        bad = _first_false(unit_bijective(kan, tabs)) if len(tabs) else None
        xs = _sampled(C, seed + 1, exhaustive, sample_size, samples, inverting=relation)
        if bad is None:
            for n, x in enumerate(xs):
                comps, sizes = kan.unit_components(x)
                d = next((d for d, comp in enumerate(comps) if _bijective(comp, sizes[F.obj(d)])), None)
                if d is not None:
                    bad = (len(tabs) + n, d)
                    break
        total = len(tabs) + len(xs)
        out["unit"] = Verdict.fail("unit-not-bijective", bad) if bad else Verdict.ok([("probes", (total,))])

    bad = None
    for y in C.objects:
        t = kan_of_representable(F, y, kan)
        if not is_natural_iso(t).holds:
            bad = ("kan-representable", (y,))
            break
    out["kan-representables"] = Verdict.fail(*bad) if bad else Verdict.ok()
    return out


# -- entry points -------------------------------------------------------------


def check_presentation(
    F: Functor,
    choice: Mapping[int, Subcat] | None = None,
    *,
    oracle: bool = False,
    seed: int = 0,
    samples: int = 20,
) -> PresentationReport:
    """Run the criterion; every sub-verdict is computed even when an earlier one fails.

    Without ``choice`` the relation is ``S_C`` and the condition is
    ``C_d``-lifting for each ``d``.  With ``choice`` each ``choice[d]`` is
    checked for admissibility and the relation is ``S_A``; if that fails the
    ``C_d`` route is still reported and decides the conclusion.
    """
    v = validate_functor(F)
    if not v.holds:
        raise StructureError(f"invalid functor: {v.counterexample}")
    C = F.domain
    hyp = _hypotheses(F)
    es, notes = _essential_surjectivity(F)
    lifting = {d: has_lifting_property(F, d, Subcat.whole(C_d(F, d)), checked=True) for d in C.objects}
    lifting_ok = all(v.holds for v in lifting.values())

    admissibility = None
    relation_name, relation = "S_C", S_C(F)
    route_ok = lifting_ok
    if choice is not None:
        missing = [d for d in C.objects if d not in choice]
        if missing:
            raise StructureError(f"no subcategory chosen for {C.obj_names[missing[0]]}")
        admissibility = {d: is_admissible(F, d, choice[d]) for d in C.objects}
        if all(v.holds for v in admissibility.values()):
            relation_name, relation = "S_A", S_A(F, choice)
            route_ok = True
            notes.append("route: every chosen A_d is F-admissible")
        else:
            notes.append("route: a chosen A_d is not admissible; fell back to C_d-lifting")
    else:
        notes.append("route: C_d-lifting for every d")

    if not _hypotheses_hold(hyp):
        conclusion = HYPOTHESES_NOT_MET
        notes.append("the criterion is sufficient only under its hypotheses; no verdict on the presentation itself")
    elif es.holds and route_ok:
        conclusion = PRESENTATION
        notes.append("under the hypotheses this verdict is equivalent to the homotopical statement")
    else:
        conclusion = CRITERION_FAILS

    report = PresentationReport(F, hyp, es, lifting, relation_name, relation, conclusion, admissibility, notes=notes)
    if oracle:
        report.oracle = oracle_battery(F, relation, seed=seed, samples=samples)
        report.notes.append(
            "oracle: Set-valued presheaves, bijections stand in for weak equivalences"
        )
    return report


def _hom_bijection(F: Functor) -> Verdict:
    C, B = F.domain, F.codomain
    for d in C.objects:
        for e in C.objects:
            image = sorted(F(k) for k in C.hom(d, e))
            if image != sorted(B.hom(F.obj(d), F.obj(e))):
                return Verdict.fail("hom-not-bijective", (d, e))
    return Verdict.ok()


def check_universal_equivalence(F: Functor) -> Verdict:
    """Equivalence of categories, which under the hypotheses is universal equivalence.

    Parts: the full/faithful/essentially-surjective characterization, and the
    hom-set bijection ``hom(d, e) -> hom(Fd, Fe)`` tested directly.
    """
    hyp = _hypotheses(F)
    if not _hypotheses_hold(hyp):
        bad = next(v for v in hyp.values() if v is None or not v.holds)
        raise HypothesesNotMet(f"{HYPOTHESES_NOT_MET}: {None if bad is None else bad.counterexample}")
    eq = is_equivalence(F)
    hb = _hom_bijection(F)
    ff = is_full(F).holds and is_faithful(F).holds
    if ff != hb.holds:
        raise AssertionError("hom-set bijection disagrees with full and faithful")
    return Verdict.all_of({**eq.parts, "hom-bijection": hb})


def check_presentation_via_adjunction(a: Adjunction) -> PresentationReport:
    """``F ⊣ G`` with finite limits on the domain, right fractions for ``S_C``
    and ``G`` fully faithful gives a presentation with relation ``S_C``.

    On success the factorization ``F = H∘P`` through the localization is
    built and ``H`` is checked to be an equivalence.
    """
    v = verify_adjunction(a)
    if not v.holds:
        raise StructureError(f"invalid adjunction: {v.counterexample}")
    F, G = a.left, a.right
    C = F.domain
    sc = S_C(F)
    full, faithful = is_full(G), is_faithful(G)
    hyp = {
        "finite-limits": has_finite_limits(C),
        "right-fractions": check_right_fractions(C, sc),
        "right-adjoint-full": full,
        "right-adjoint-faithful": faithful,
    }
    es, notes = _essential_surjectivity(F)
    lifting = {d: has_lifting_property(F, d, Subcat.whole(C_d(F, d)), checked=True) for d in C.objects}
    extra: dict[str, Verdict] = {}
    notes.append("route: adjunction with fully faithful right adjoint")
    if all(v.holds for v in hyp.values()):
        loc = localize(C, sc)
        H = induced_functor(F, sc, loc)
        extra["factorization"] = Verdict.ok()
        extra["H-equivalence"] = is_equivalence(H)
        notes.append(f"F = H∘P through {loc.quotient.name} with {loc.quotient.n_morphisms} morphisms")
        conclusion = PRESENTATION if extra["H-equivalence"].holds else CRITERION_FAILS
    else:
        conclusion = HYPOTHESES_NOT_MET
    return PresentationReport(
        F, hyp, es, lifting, "S_C", sc, conclusion, extra=extra, notes=notes, title="adjunction check"
    )


def right_fraction_subsets(F: Functor, *, max_free: int = 8) -> Iterator[frozenset[int]]:
    """Subsets ``Σ ⊆ S_C`` admitting right fractions, ascending by size.

    ``Σ`` always contains the identities.  When ``S_C`` has at most
    ``max_free`` other members every subset is tried, otherwise only the
    identities, the isomorphisms and ``S_C`` itself.
    """
    C = F.domain
    sc = S_C(F)
    ids = frozenset(C.identities)
    free = sorted(sc - ids)
    if len(free) <= max_free:
        cands = (ids | set(extra) for r in range(len(free) + 1) for extra in combinations(free, r))
    else:
        cands = iter(sorted({ids, isomorphisms(C) & sc, sc}, key=len))
    for s in cands:
        s = frozenset(s)
        if check_right_fractions(C, s).holds:
            yield s


def cross_validate(
    F: Functor,
    report: PresentationReport,
    *,
    seed: int = 0,
    samples: int = 20,
    max_free: int = 8,
) -> Verdict:
    """Confirm a positive report through the presheaf oracle.

    Also checks that every right-fractions ``Σ ⊆ S_C`` whose subcategories
    ``A^Σ_d`` are admissible leads to a presentation on the ``S_C`` route.
    """
    if report.conclusion != PRESENTATION:
        raise StructureError("cross-validation needs a positive report")
    parts = dict(oracle_battery(F, report.relation, seed=seed, samples=samples))
    sc_ok = check_presentation(F).holds
    bad = None
    for n, sigma in enumerate(right_fraction_subsets(F, max_free=max_free)):
        choice = {d: A_sigma(F, sigma, d) for d in F.domain.objects}
        r = check_presentation(F, choice)
        if r.relation_name == "S_A" and r.holds and not sc_ok:
            bad = ("upgrade-fails", (n,))
            break
    parts["upgrade-to-S_C"] = Verdict.fail(*bad) if bad else Verdict.ok()
    return Verdict.all_of(parts)

