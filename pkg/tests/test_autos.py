import random

import pytest
from hypothesis import given, strategies as st

from coxstar.autos import (
    AutError,
    FactorizationError,
    apply,
    build_complement_Q,
    check_center_P2,
    compose,
    diag,
    enumerate_P3,
    factorize_automorphism,
    format_cycles,
    from_basics,
    identity_aut,
    inner,
    invert_aut,
    is_complement,
    make_basic,
    parse_automorphism,
    parse_cycles,
    phi,
    psi,
    relation_suite,
    sigma,
    spe_membership,
    splitting_predicate,
    structure_report,
    tau,
    unit_group_complement,
    verify_is_automorphism,
)
from coxstar.autos.basic import Automorphism
from coxstar.diagram import StarSystem
from coxstar.sampling import random_basics, random_word
from coxstar.words import GroupElement, from_letters, make_delta

from support import SMALL

S = StarSystem.of(3, 4)
S23 = StarSystem.of(2, 3)


def el(sys, *letters):
    return from_letters(sys, letters)


def table(sys, b):
    return [str(x) for x in make_basic(sys, b).images]


# --- frozen examples -------------------------------------------------------------------


def test_make_basic_examples():
    assert make_basic(S23, tau(1)).images == (el(S23, 0), el(S23, 0, 1), el(S23, 2))
    assert make_basic(S, phi(1, 2)).images[1] == el(S, 1, 0, 1)
    d2 = make_delta(S, 2)
    assert make_basic(S, psi(2, 1)).images[1] == d2 * el(S, 1) * d2


@pytest.mark.parametrize("sys, b", [
    (S, tau(1)),          # label 3, not 2
    (S, phi(1, 3)),       # gcd(3, 3) != 1
    (S, psi(1, 2)),       # odd label
    (S, sigma(2, 1)),     # label 4, not 2
    (S, psi(2, 2)),
    (S, diag((2, 1))),    # labels differ
    (S, phi(3, 1)),
])
def test_make_basic_rejects(sys, b):
    with pytest.raises(AutError):
        make_basic(sys, b)


def test_apply_examples():
    g = el(S, 0, 1, 2)
    assert apply(identity_aut(S), g) == g
    w = el(S, 2, 1)
    assert apply(make_basic(S, inner(w)), g) == w * g * ~w
    assert apply(make_basic(S, phi(1, 2)), el(S, 0, 1)) == el(S, 0, 1) ** 2


def test_compose_invert_examples():
    t1 = make_basic(S23, tau(1))
    assert compose(t1, t1).is_identity()
    p = make_basic(S, phi(1, 2))
    assert invert_aut(p) == p
    s46 = StarSystem.of(3, 4, 2)
    lhs = from_basics(s46, [psi(3, 1), sigma(3, 1)])
    assert lhs == make_basic(s46, phi(1, 2))


def test_verify_examples():
    assert verify_is_automorphism(S23, make_basic(S23, tau(1)).images)
    v = verify_is_automorphism(S, [el(S, 1), el(S, 0), el(S, 2)])
    assert not v and "(s0 s2)^4" in v.failure
    assert verify_is_automorphism(S, identity_aut(S).images)
    # a homomorphism that is not onto
    assert not verify_is_automorphism(S23, [el(S23, 0), el(S23, 0), el(S23, 2)])


def test_relation_suite_examples():
    for labels in ((2, 3), (3, 4), (2, 2)):
        rep = relation_suite(StarSystem(labels))
        assert rep.ok and rep.checks
    assert relation_suite(StarSystem.of(2, 2)).counts()["sigma-eq-psi"][1] >= 2


def test_enumerate_P3_examples():
    assert len(enumerate_P3(S23)) == 2
    assert make_basic(S23, phi(2, 2)).images in {a.images for a in enumerate_P3(S23)}
    assert len(enumerate_P3(S)) == 1
    assert len(enumerate_P3(StarSystem.of(2, 3, 5))) == 4


def test_center_examples():
    assert check_center_P2(S23).ok
    r = check_center_P2(StarSystem.of(4, 4))
    assert r.ok and r.witness
    r = check_center_P2(S)
    assert r.ok and r.noncentral == 0


def test_structure_report_examples():
    r = structure_report(S)
    assert (r["T_order"], r["P1_order"], r["P3_order"]) == (1, 4, 1)
    r = structure_report(StarSystem.of(2, 2))
    assert (r["T_order"], r["P1_order"]) == (4, 1)
    r = structure_report(StarSystem.of(3, 3, 4))
    assert (r["Diag_order"], r["P1_order"]) == (2, 8)


def test_splitting_examples():
    assert splitting_predicate([3, 4])
    assert not splitting_predicate([5, 5])
    assert not splitting_predicate([2, 13])
    assert unit_group_complement(3) == (1,)
    k = unit_group_complement(8)
    assert k is not None and is_complement(k, 8)
    assert unit_group_complement(5) is None
    assert build_complement_Q(StarSystem.of(5, 5)) is None


def test_build_Q_certificates():
    for labels in ((3, 4), (4, 4, 3), (7, 2), (12, 5)):
        q = build_complement_Q(StarSystem(labels))
        assert q is not None and q.ok, q


def test_factorize_examples():
    f = factorize_automorphism(make_basic(S, inner([1])))
    assert f.w == el(S, 1) and f.p == () and f.t == () and f.rho == (1, 2)
    a = from_basics(S, [inner([0, 1]), phi(2, 3), psi(2, 1)])
    assert factorize_automorphism(a).recompose() == a
    s33 = StarSystem.of(3, 3)
    f = factorize_automorphism(make_basic(s33, diag((2, 1))))
    assert f.w.is_identity() and f.p == () and f.t == () and f.rho == (2, 1)


def test_factorize_rejects_non_automorphism():
    bogus = Automorphism(S23, (el(S23, 0), el(S23, 0), el(S23, 2)))
    with pytest.raises(FactorizationError):
        factorize_automorphism(bogus)


def test_spe_examples():
    assert not spe_membership(make_basic(S23, tau(1)))
    assert spe_membership(make_basic(S, psi(2, 1)))
    assert not spe_membership(make_basic(StarSystem.of(4, 4), diag((2, 1))))
    assert spe_membership(make_basic(StarSystem.of(3, 3), diag((2, 1))))


def test_text_formats():
    assert format_cycles((2, 3, 1, 4)) == "(1 2 3)"
    assert parse_cycles("(1 2 3)", 4) == (2, 3, 1, 4)
    a = parse_automorphism(S, "inner(s0 s1) phi(2,3) psi(2,1)")
    assert a == from_basics(S, [inner([0, 1]), phi(2, 3), psi(2, 1)])
    b = parse_automorphism(S, "s1 -> s1 s0 s1\n")
    assert b == make_basic(S, phi(1, 2))
    with pytest.raises(AutError):
        parse_automorphism(S, "s1 -> s0\nphi(1,2)")


# --- properties --------------------------------------------------------------------------


@st.composite
def product(draw, systems=SMALL, count=6):
    sys = draw(st.sampled_from(systems))
    rng = random.Random(draw(st.integers(0, 2**32)))
    return sys, random_basics(rng, sys, count)


@given(product())
def test_products_are_automorphisms(data):
    sys, basics = data
    a = from_basics(sys, basics)
    assert verify_is_automorphism(sys, a.images)


@given(product(), st.integers(0, 2**16))
def test_apply_is_a_homomorphism(data, seed):
    sys, basics = data
    a = from_basics(sys, basics)
    rng = random.Random(seed)
    u = from_letters(sys, random_word(rng, sys, 8))
    v = from_letters(sys, random_word(rng, sys, 8))
    assert a(u * v) == a(u) * a(v)


@given(product(count=3), product(count=3))
def test_compose_matches_application(d1, d2):
    sys, b1 = d1
    _, b2 = d2
    if d2[0] != sys:
        return
    a, b = from_basics(sys, b1), from_basics(sys, b2)
    ab = compose(a, b)
    for i in range(sys.rank):
        g = GroupElement.gen(sys, i)
        assert ab(g) == a(b(g))


@given(product())
def test_inverse(data):
    sys, basics = data
    a = from_basics(sys, basics)
    inv = invert_aut(a)
    assert compose(a, inv).is_identity() and compose(inv, a).is_identity()
    # without provenance the inverse goes through the factorization
    bare = Automorphism(sys, a.images)
    assert invert_aut(bare) == inv


@given(product())
def test_factorization_roundtrip(data):
    sys, basics = data
    a = from_basics(sys, basics)
    f = factorize_automorphism(a)
    assert f.recompose() == a
    assert all(b.kind in ("psi", "phi", "sigma") for b in f.p)


@given(product(count=4))
def test_spe_closed_under_P(data):
    sys, basics = data
    keep = [b for b in basics if b.kind in ("inner", "phi", "psi")]
    assert spe_membership(from_basics(sys, keep))
