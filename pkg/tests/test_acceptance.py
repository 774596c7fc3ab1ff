"""The ten acceptance criteria, each with its tolerance and time limit.

Every test prints one ``criterion N: PASS|FAIL`` line (also collected into
the terminal summary) before asserting.
"""
import random
import time
from pathlib import Path

import fincat
from fincat import FinCat, Functor, StructureError, compose_functors, is_isomorphism, validate_category, validate_functor
from fincat.cli import main
from fincat.comma import (
    C_d,
    S_C,
    Subcat,
    comma_under_F,
    has_lifting_property,
    is_admissible,
    is_cofiltered,
    is_initial_functor,
    restricted_F_d,
)
from fincat.core import isomorphisms
from fincat.corpus import (
    arrow,
    boundary,
    chain,
    constant_maps_monoid,
    corpus_functors,
    cyclic_group,
    finite_limit_categories,
    idempotent_inclusion,
    named_categories,
    point,
    preorder,
    split_idempotent,
    terminal,
    walking_idempotent,
    walking_iso,
)
from fincat.decision import (
    HYPOTHESES_NOT_MET,
    check_presentation,
    check_universal_equivalence,
    oracle_battery,
    right_fraction_subsets,
)
from fincat.enumerate import functors
from fincat.fractions import A_sigma, compose_fractions, localize, ore_completions
from fincat.io import parse
from fincat.presheaf import is_natural_iso, kan_of_representable

from .conftest import ACCEPTANCE
from .instances import certified, sigma_pairs

EXAMPLES = Path(fincat.__file__).parent / "examples"
GOLDEN = Path(__file__).parent / "golden"


def record(n: int, ok: bool, detail: str, elapsed: float, limit: float | None = None) -> None:
    within = limit is None or elapsed < limit
    budget = f" (limit {limit:.0f} s)" if limit else ""
    line = f"criterion {n}: {'PASS' if ok and within else 'FAIL'}  {detail}; {elapsed:.1f} s{budget}"
    print(line)
    ACCEPTANCE.append(line)
    assert ok, line
    assert within, line


# -- 1 ------------------------------------------------------------------------


def _mutations(cats):
    """Every single composition entry replaced by any other morphism."""
    for ci, c in enumerate(cats):
        entries = c.compose_entries()
        for key in sorted(entries):
            for h in c.morphisms:
                if h != entries[key]:
                    yield ci, key, h


def _detected(c: FinCat, key, h) -> bool:
    entries = c.compose_entries()
    entries[key] = h
    try:
        mutated = FinCat(c.obj_names, c.morphism_specs(), c.identities, entries, "M")
    except StructureError:
        return True
    return not validate_category(mutated).holds


def test_criterion_1_law_suite():
    t = time.perf_counter()
    cats = list(finite_limit_categories()) + list(named_categories().values())
    valid = all(validate_category(c).holds for c in cats)
    valid &= all(validate_functor(F).holds for _, F in corpus_functors())
    pool = list(_mutations(cats))
    sample = random.Random(0).sample(pool, 100)
    detected = sum(_detected(cats[ci], key, h) for ci, key, h in sample)
    elapsed = time.perf_counter() - t
    record(1, valid and detected == 100, f"corpus valid={valid}, mutations detected {detected}/100", elapsed, 10)


# -- 2 ------------------------------------------------------------------------


def test_criterion_2_commas_cofiltered():
    t = time.perf_counter()
    total = bad = 0
    for _, F in certified():
        for b in F.codomain.objects:
            total += 1
            bad += not is_cofiltered(comma_under_F(F, b).carrier).holds
        for d in F.domain.objects:
            total += 1
            bad += not is_cofiltered(C_d(F, d).carrier).holds
    elapsed = time.perf_counter() - t
    record(2, bad == 0, f"{total - bad}/{total} commas and C_d cofiltered over {len(certified())} functors", elapsed, 60)


# -- 3 ------------------------------------------------------------------------


def _admissible_instances():
    for _, F in certified():
        C = F.domain
        for d in C.objects:
            yield F, d, Subcat.whole(C_d(F, d))
        if C.n_objects <= 4:
            for s in right_fraction_subsets(F, max_free=6):
                for d in C.objects:
                    yield F, d, A_sigma(F, s, d)
    for C, s in sigma_pairs():
        P = localize(C, s).p
        for d in C.objects:
            yield P, d, A_sigma(P, s, d)


def test_criterion_3_admissible_restrictions_initial():
    t = time.perf_counter()
    certified_admissible = bad = 0
    for F, d, a in _admissible_instances():
        if not is_admissible(F, d, a).holds:
            continue
        certified_admissible += 1
        bad += not is_initial_functor(restricted_F_d(F, d, a)).holds
    elapsed = time.perf_counter() - t
    ok = bad == 0 and certified_admissible > 0
    record(3, ok, f"{certified_admissible - bad}/{certified_admissible} admissible A_d give initial F_d|A_d", elapsed)


# -- 4 ------------------------------------------------------------------------

TARGETS = [
    terminal(),
    boundary(),
    arrow(),
    walking_iso(),
    walking_idempotent(),
    split_idempotent(),
    constant_maps_monoid(),
    cyclic_group(2),
    chain(3),
    preorder(["a", "b", "t"], lambda x, y: x == y or y == "t", name="Cospan"),
    preorder(["s", "a", "b"], lambda x, y: x == y or x == "s", name="Span"),
]


def test_criterion_4_localization():
    t = time.perf_counter()
    pairs = sigma_pairs()
    fails = {"a": 0, "b": 0, "c": 0}
    checked_functors = 0
    for C, s in pairs:
        loc = localize(C, s)
        if not all(is_isomorphism(loc.quotient, loc.p(k)).holds for k in s):
            fails["a"] += 1
        if C.n_morphisms <= 12:
            fracs = sorted(loc.class_of)
            for first in fracs:
                for second in fracs:
                    if C.tgt[first[1]] != C.tgt[second[0]]:
                        continue
                    got = {compose_fractions(loc, C, first, second, sq) for sq in ore_completions(C, s, second[0], first[1])}
                    if len(got) != 1:
                        fails["b"] += 1
        for X in TARGETS:
            through: dict = {}
            for G1 in functors(loc.quotient, X):
                G = compose_functors(G1, loc.p)
                through[G.on_obj, G.on_mor] = through.get((G.on_obj, G.on_mor), 0) + 1
            for G in functors(C, X):
                if all(is_isomorphism(X, G(k)).holds for k in s):
                    checked_functors += 1
                    if through.get((G.on_obj, G.on_mor)) != 1:
                        fails["c"] += 1
    elapsed = time.perf_counter() - t
    ok = not any(fails.values())
    detail = f"{len(pairs)} (C, Σ) pairs, {checked_functors} Σ-inverting functors; failures a/b/c = {fails['a']}/{fails['b']}/{fails['c']}"
    record(4, ok, detail, elapsed, 300)


# -- 5 ------------------------------------------------------------------------


def test_criterion_5_kan_of_representables():
    t = time.perf_counter()
    fs = [F for _, F in corpus_functors()] + [idempotent_inclusion()]
    fs.append(Functor.from_names(boundary(), point(), {"0": "*", "1": "*"}))
    fs.append(Functor.from_names(boundary(), arrow(), {"0": "0", "1": "1"}))
    total = bad = 0
    for F in fs:
        for y in F.domain.objects:
            total += 1
            bad += not is_natural_iso(kan_of_representable(F, y)).holds
    elapsed = time.perf_counter() - t
    record(5, bad == 0, f"{total - bad}/{total} (F, y) with F_* r(y) ≅ r(Fy) over {len(fs)} functors", elapsed)


# -- 6 ------------------------------------------------------------------------


def test_criterion_6_counit_unit_shadows():
    t = time.perf_counter()
    instances = [F for _, F in certified()]
    instances += [localize(C, s).p for C, s in sigma_pairs()]
    positive = bad = probes = 0
    for F in instances:
        report = check_presentation(F)
        if not report.holds:
            continue
        positive += 1
        out = oracle_battery(F, report.relation, seed=0, exhaustive=2, sample_size=3, samples=20)
        for key in ("counit", "unit"):
            v = out[key]
            if v.holds:
                probes += v.witnesses[0][1][0]
            else:
                bad += 1
    elapsed = time.perf_counter() - t
    record(6, bad == 0, f"{positive} presentation instances, {probes} probes, {bad} failing batteries", elapsed, 600)


# -- 7 ------------------------------------------------------------------------


def test_criterion_7_universal_equivalence_coherence():
    t = time.perf_counter()
    agree = total = 0
    for _, F in certified():
        total += 1
        ue = check_universal_equivalence(F).holds
        r = check_presentation(F)
        agree += ue == (r.holds and r.relation == isomorphisms(F.domain))
    elapsed = time.perf_counter() - t
    record(7, agree == total, f"{agree}/{total} agree", elapsed)


# -- 8 ------------------------------------------------------------------------


def _cli(capsys, *argv):
    code = main([str(a) for a in argv])
    return code, capsys.readouterr().out


def test_criterion_8_negative_examples(capsys):
    t = time.perf_counter()
    findings = []
    for name in ("boundary-to-point", "boundary-to-arrow"):
        F = parse(EXAMPLES / f"{name}.cat").functor("F")
        r = check_presentation(F)
        findings.append(r.conclusion == HYPOTHESES_NOT_MET)
        findings.append(r.hypotheses["finite-limits"].counterexample == ("no-terminal", ()))
    F = parse(EXAMPLES / "boundary-to-arrow.cat").functor("F")
    raw = has_lifting_property(F, 0, Subcat.whole(C_d(F, 0)))
    findings.append(raw.counterexample == ("no-lift", (0, 1, F.codomain.mor("u"))))
    goldens = 0
    for name in ("boundary-to-point", "boundary-to-arrow"):
        for fmt, suffix in (("text", "txt"), ("json", "json")):
            code, out = _cli(capsys, "check-presentation", EXAMPLES / f"{name}.cat", "--format", fmt)
            goldens += code == 2 and out == (GOLDEN / f"{name}.{suffix}").read_text(encoding="utf-8")
    elapsed = time.perf_counter() - t
    ok = all(findings) and goldens == 4
    record(8, ok, f"verdict checks {sum(findings)}/{len(findings)}, goldens byte-exact {goldens}/4", elapsed)


# -- 9 ------------------------------------------------------------------------


def test_criterion_9_cauchy_completion_report():
    t = time.perf_counter()
    J = parse(EXAMPLES / "idempotent-splitting.cat").functor("J")
    r = check_presentation(J, oracle=True)
    text = r.to_text()
    both = (
        r.conclusion == HYPOTHESES_NOT_MET
        and r.oracle["counit"].holds
        and "conclusion: hypotheses-not-met" in text
        and "counit: holds" in text
    )
    elapsed = time.perf_counter() - t
    probes = r.oracle["counit"].witnesses[0][1][0] if r.oracle["counit"].holds else 0
    record(9, both, f"hypotheses-not-met with counit bijective on {probes} probes, both in report", elapsed)


# -- 10 -----------------------------------------------------------------------


def test_criterion_10_monotonicity():
    t = time.perf_counter()
    tested = bad = 0
    for _, F in certified():
        C = F.domain
        if C.n_objects > 4:
            continue
        sc = S_C(F)
        sc_route = None
        for s in right_fraction_subsets(F, max_free=6):
            if s == sc:
                continue
            r = check_presentation(F, {d: A_sigma(F, s, d) for d in C.objects})
            if r.relation_name != "S_A" or not r.holds:
                continue
            if sc_route is None:
                sc_route = check_presentation(F).holds
            tested += 1
            bad += not sc_route
    elapsed = time.perf_counter() - t
    record(10, bad == 0 and tested > 0, f"{tested - bad}/{tested} Σ-presentations upgrade to S_C", elapsed)
