"""Randomized properties over small generated categories and functors."""
import random

from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from fincat import FinCat, compose_functors, identity_functor, is_equivalence, is_isomorphism, opposite, validate_category
from fincat.comma import (
    C_d,
    F_d,
    Subcat,
    comma_under_F,
    has_lifting_property,
    is_admissible,
    is_cofiltered,
    is_connected,
    is_initial_functor,
    restricted_F_d,
)
from fincat.corpus import (
    action_category,
    constant_maps_monoid,
    cyclic_group,
    lattice_of_sets,
    named_categories,
    preorder,
    product_category,
    split_idempotent,
    walking_idempotent,
)
from fincat.enumerate import functors, natural_isomorphism, sample_presheaves
from fincat.io import dump_category, parse_text
from fincat.limits import has_finite_limits, preserves_finite_limits
from fincat.presheaf import KanExtension, left_kan

from . import oracles

SETTINGS = settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@st.composite
def posets(draw, max_objects=5):
    n = draw(st.integers(1, max_objects))
    rel = {(i, j) for i in range(n) for j in range(i + 1, n) if draw(st.booleans())}
    changed = True
    while changed:
        changed = False
        for a, b in list(rel):
            for c, d in list(rel):
                if b == c and (a, d) not in rel:
                    rel.add((a, d))
                    changed = True
    names = [f"p{i}" for i in range(n)]
    return preorder(names, lambda x, y: x == y or (int(x[1:]), int(y[1:])) in rel, name="R")


POOL = [
    walking_idempotent(),
    split_idempotent(),
    constant_maps_monoid(),
    cyclic_group(3),
    action_category(2),
    *named_categories().values(),
]

categories = st.one_of(posets(), st.sampled_from(POOL))


@st.composite
def lattices(draw, universe=3, max_sets=3):
    family = draw(st.lists(st.frozensets(st.integers(1, universe)), max_size=max_sets))
    c = lattice_of_sets(family, range(1, universe + 1), name="L")
    assume(c.n_objects <= 6)
    return c


@st.composite
def limit_functors(draw):
    """A functor between finite-limit categories that preserves finite limits."""
    c = draw(lattices())
    x = draw(st.one_of(lattices(2, 2), st.sampled_from([action_category(2), action_category(3)])))
    fs = [F for F in functors(c, x) if preserves_finite_limits(F).holds]
    # the constant functor at a terminal object always qualifies
    assert fs
    return fs[draw(st.integers(0, len(fs) - 1))]


@st.composite
def functor_pairs(draw, max_objects=4):
    c = draw(st.one_of(posets(max_objects), st.sampled_from(POOL)))
    x = draw(st.one_of(posets(3), st.sampled_from(POOL)))
    fs = list(functors(c, x))
    assume(fs)
    return fs[draw(st.integers(0, len(fs) - 1))]


def _tables(c):
    return (c.obj_names, c.mor_names, c.src, c.tgt, c.identities, c.compose_entries())


@SETTINGS
@given(categories)
def test_opposite_is_involution(c):
    assert _tables(opposite(opposite(c))) == _tables(c)


@SETTINGS
@given(categories)
def test_generated_categories_validate(c):
    assert validate_category(c).holds


@SETTINGS
@given(categories, st.data())
def test_mutation_detected_unless_still_a_category(c, data):
    entries = c.compose_entries()
    key = data.draw(st.sampled_from(sorted(entries)))
    g, f = key
    others = [h for h in c.morphisms if h != entries[key] and c.src[h] == c.src[f] and c.tgt[h] == c.tgt[g]]
    assume(others)
    entries[key] = data.draw(st.sampled_from(others))
    specs = c.morphism_specs()
    mutated = FinCat(c.obj_names, specs, c.identities, entries, "M")
    lawful = oracles.category_laws(c.n_morphisms, c.src, c.tgt, c.identities, entries)
    assert validate_category(mutated).holds == lawful


@SETTINGS
@given(categories)
def test_inverse_of_inverse(c):
    for f in c.morphisms:
        v = is_isomorphism(c, f)
        assert v.holds == bool(oracles.inverses(c, f))
        if v.holds:
            g = v.witnesses[0][1][0]
            w = is_isomorphism(c, g)
            assert w.holds and w.witnesses[0][1][0] == f


@SETTINGS
@given(categories)
def test_cofiltered_implies_connected(c):
    if is_cofiltered(c).holds:
        assert is_connected(c).holds


@SETTINGS
@given(posets())
def test_poset_limits_are_meets(c):
    meets = all(oracles.meet(c, a, b) is not None for a in c.objects for b in c.objects)
    assert has_finite_limits(c).holds == (bool(oracles.terminal(c)) and meets)


@SETTINGS
@given(categories)
def test_text_round_trip(c):
    assert _tables(parse_text(dump_category(c)).category(c.name)) == _tables(c)


@SETTINGS
@given(functor_pairs())
def test_equivalence_iff_quasi_inverse(F):
    C, B = F.domain, F.codomain
    found = any(
        natural_isomorphism(compose_functors(G, F), identity_functor(C)) is not None
        and natural_isomorphism(compose_functors(F, G), identity_functor(B)) is not None
        for G in functors(B, C)
    )
    assert is_equivalence(F).holds == found


@SETTINGS
@given(limit_functors())
def test_lifting_iff_F_d_initial(F):
    for d in F.domain.objects:
        lift = has_lifting_property(F, d, Subcat.whole(C_d(F, d))).holds
        assert lift == is_initial_functor(F_d(F, d)).holds


@SETTINGS
@given(functor_pairs(3), st.integers(0, 2**16))
def test_left_kan_matches_colimit_formula(F, seed):
    rng = random.Random(seed)
    for x in sample_presheaves(F.domain, 2, 3, rng):
        ext = left_kan(F, x)
        for b in F.codomain.objects:
            _, lab = oracles.kan_value(F, x.sizes, x.action, b)
            assert ext.sizes[b] == len(set(lab))


@SETTINGS
@given(functor_pairs(3), st.integers(0, 2**16))
def test_counit_unit_match_oracle(F, seed):
    kan = KanExtension(F)
    rng = random.Random(seed)
    for y in sample_presheaves(F.codomain, 2, 3, rng):
        got = [sorted(c) == list(range(y.sizes[b])) for b, c in enumerate(kan.counit_components(y))]
        assert got == oracles.counit_bijective(F, y.sizes, y.action)
    for x in sample_presheaves(F.domain, 2, 3, rng):
        comps, sizes = kan.unit_components(x)
        got = [len(set(c)) == len(c) == sizes[F.obj(d)] for d, c in enumerate(comps)]
        assert got == oracles.unit_bijective(F, x.sizes, x.action)


@SETTINGS
@given(limit_functors())
def test_commas_cofiltered_under_hypotheses(F):
    for b in F.codomain.objects:
        assert is_cofiltered(comma_under_F(F, b).carrier).holds
    for d in F.domain.objects:
        assert is_cofiltered(C_d(F, d).carrier).holds


@SETTINGS
@given(limit_functors())
def test_admissible_implies_initial(F):
    for d in F.domain.objects:
        a = Subcat.whole(C_d(F, d))
        if is_admissible(F, d, a).holds:
            assert is_initial_functor(restricted_F_d(F, d, a)).holds


@SETTINGS
@given(posets(3), posets(3))
def test_products_of_limit_categories_have_limits(a, b):
    p = product_category(a, b)
    assert has_finite_limits(p).holds == (has_finite_limits(a).holds and has_finite_limits(b).holds)
