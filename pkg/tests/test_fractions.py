from pathlib import Path

import pytest

import fincat
from fincat import Functor, compose_functors, identity_functor, is_equivalence, is_isomorphism, opposite, validate_functor
from fincat.comma import C_d, S_C, Subcat, has_lifting_property
from fincat.core import is_full, isomorphisms
from fincat.corpus import arrow, boundary, chain, finite_limit_categories, preorder, to_terminal, walking_iso
from fincat.enumerate import functors
from fincat.io import parse
from fincat.fractions import (
    A_sigma,
    LocalizationError,
    SigmaSet,
    check_left_fractions,
    check_right_fractions,
    compose_fractions,
    induced_functor,
    localize,
    localize_left,
    ore_completions,
)

from .instances import certified, sigma_pairs


def test_identities_admit_fractions():
    for c in finite_limit_categories():
        assert check_right_fractions(c, SigmaSet.identities(c)).holds


def test_isomorphisms_admit_fractions():
    for c in finite_limit_categories():
        assert check_right_fractions(c, isomorphisms(c)).holds


def test_S_C_admits_fractions():
    for _, F in certified():
        assert check_right_fractions(F.domain, S_C(F)).holds


def test_missing_identity_named():
    c = chain(2)
    v = check_right_fractions(c, SigmaSet(c, [c.identity(0)]))
    assert v.counterexample == ("RF1-identity", (1,))


def test_ore_failure():
    # a -> t <- b with no object below both a and b
    c = preorder(["a", "b", "t"], lambda x, y: x == y or y == "t", name="V")
    at = c.hom(0, 2)[0]
    v = check_right_fractions(c, SigmaSet(c, list(c.identities) + [at]))
    assert v.parts["RF2"].counterexample == ("RF2-ore", (at, c.hom(1, 2)[0]))


def test_localize_identities_is_isomorphic():
    for c in list(finite_limit_categories())[:10]:
        loc = localize(c, SigmaSet.identities(c))
        assert loc.quotient.n_morphisms == c.n_morphisms
        assert sorted(loc.p.on_mor) == list(loc.quotient.morphisms)
        assert validate_functor(loc.p).holds
        assert loc.quotient.mor_names == tuple(c.mor_names[f] for _, f in loc.reps)


def test_localize_arrow():
    D = arrow()
    u = D.mor("u")
    loc = localize(D, SigmaSet.from_names(D, ["u"]))
    Q = loc.quotient
    assert is_isomorphism(Q, loc.p(u)).holds
    back = Q.hom(1, 0)
    assert len(back) == 1
    assert loc.reps[back[0]] == (u, D.identity(0))
    assert all(len(Q.hom(a, b)) == 1 for a in Q.objects for b in Q.objects)
    assert is_equivalence(to_terminal(Q)).holds


def test_localize_walking_iso():
    I = walking_iso()
    loc = localize(I, I.morphisms)
    assert loc.quotient.n_morphisms == I.n_morphisms
    assert is_equivalence(loc.p).holds


def test_localize_refuses_without_axioms():
    c = chain(2)
    with pytest.raises(LocalizationError):
        localize(c, [c.identity(0)])


def test_localization_invariants():
    for C, s in sigma_pairs():
        loc = localize(C, s)
        Q = loc.quotient
        assert Q.obj_names == C.obj_names
        for k in s:
            assert is_isomorphism(Q, loc.p(k)).holds
        for q in Q.morphisms:
            t, f = loc.reps[q]
            assert Q.compose(loc.p(f), _inv(Q, loc.p(t))) == q


def _inv(Q, k):
    return is_isomorphism(Q, k).witnesses[0][1][0]


def test_ore_choice_independence():
    for C, s in sigma_pairs():
        if C.n_morphisms > 12:
            continue
        loc = localize(C, s)
        fracs = sorted(loc.class_of)
        for first in fracs:
            for second in fracs:
                if C.tgt[first[1]] != C.tgt[second[0]]:
                    continue
                got = {compose_fractions(loc, C, first, second, sq) for sq in ore_completions(C, s, second[0], first[1])}
                assert len(got) == 1


def test_induced_functor_examples():
    for C, s in sigma_pairs()[::4]:
        loc = localize(C, s)
        H = induced_functor(loc.p, s, loc)
        assert H.on_mor == tuple(loc.quotient.morphisms)
    D, I = arrow(), walking_iso()
    F = Functor.from_names(D, I, {"0": "0", "1": "1"}, {"u": "i"})
    s = SigmaSet.from_names(D, ["u"])
    loc = localize(D, s)
    H = induced_functor(F, s, loc)
    assert is_equivalence(H).holds


def test_induced_functor_factorizes():
    for _, F in certified():
        if F.domain.n_objects > 4:
            continue
        s = S_C(F)
        loc = localize(F.domain, s)
        H = induced_functor(F, s, loc)
        assert validate_functor(H).holds
        assert compose_functors(H, loc.p) == F


def test_A_sigma_examples():
    c = chain(3)
    F = identity_functor(c)
    for d in c.objects:
        a = A_sigma(F, SigmaSet.identities(c), d)
        assert [a.parent.labels[x] for x in a.objects] == [(d, c.identity(d))]


def test_left_fractions_are_dual():
    for C, s in sigma_pairs()[::3]:
        assert check_left_fractions(C, s).holds == check_right_fractions(opposite(C), s).holds
    for c in list(finite_limit_categories())[:8]:
        loc = localize_left(c, SigmaSet.identities(c))
        assert loc.quotient.n_morphisms == c.n_morphisms
        assert validate_functor(loc.p).holds
        assert loc.p.domain == c


def test_left_localization_inverts_sigma():
    # Chain3 with b: 1 -> 2 inverted admits left fractions
    bundle = parse(Path(fincat.__file__).parent / "examples" / "chain-collapse.cat")
    c = bundle.category("Chain3")
    s = bundle.sigmas["Chain3"]
    assert check_left_fractions(c, s).holds
    loc = localize_left(c, s)
    for k in s.members:
        assert is_isomorphism(loc.quotient, loc.p(k)).holds
    assert "b\\id_2" in loc.quotient.mor_names


def test_universal_property_small():
    targets = [arrow(), boundary(), walking_iso(), chain(3)]
    for C, s in sigma_pairs()[:25]:
        loc = localize(C, s)
        for X in targets:
            through = {}
            for G1 in functors(loc.quotient, X):
                G = compose_functors(G1, loc.p)
                through[G.on_obj, G.on_mor] = through.get((G.on_obj, G.on_mor), 0) + 1
            for G in functors(C, X):
                if all(is_isomorphism(X, G(k)).holds for k in s):
                    assert through.get((G.on_obj, G.on_mor)) == 1


def test_fullness_bridges():
    for _, F in certified():
        if F.domain.n_objects > 4:
            continue
        C = F.domain
        s = S_C(F)
        loc = localize(C, s)
        H = induced_functor(F, s, loc)
        lifting = all(has_lifting_property(F, d, Subcat.whole(C_d(F, d))).holds for d in C.objects)
        assert is_full(H).holds == lifting
        a_lift = all(has_lifting_property(F, d, A_sigma(F, s, d)).holds for d in C.objects)
        if a_lift:
            assert is_full(H).holds
