import itertools
import json
import random
from fractions import Fraction as Fr

import pytest
from hypothesis import given, strategies as st

from ringkit.chainring import (BudgetExceeded, GeneratingFamily, NotFoundError, OverlapPatternError,
                               PreconditionError, StructureError, Word, certify_F_pair, disjoint_pushers, displace,
                               expand_ring, is_chain, is_ring, p1, p1_consistency, pushed_image, replay,
                               shrink_into, stabilize, verify_ring_group)
from ringkit.foundation import IntervalSet, FormatError
from ringkit.plmap import PLMap, compose, conjugate, inverse
from ringkit.tnring import build_family
from ringkit.treepair import generator, random_pair, to_plmap


def slow_pair(e=Fr(1, 32), d=Fr(1, 8)):
    f = PLMap.from_nodes([(0, 0), (Fr(1, 4), Fr(1, 4) + e), (Fr(1, 2), Fr(1, 2)), (1, 1)])
    g = PLMap.from_nodes([(0, 0), (Fr(1, 4), Fr(1, 4)), (Fr(1, 2), Fr(1, 2) + d), (1, 1)])
    return f, g


def brute_min_N(f, g, a2, b, limit=40):
    """Oracle: iterate points instead of building powers."""
    for N in range(1, limit):
        x = a2
        for _ in range(N):
            x = f(x)
        for _ in range(N):
            x = g(x)
        if x >= b:
            return N


# -- words ---------------------------------------------------------------------

def test_word_syntax():
    w = Word.parse("f1 f3^-2 f2^4")
    assert w.syllables == ((1, 1), (3, -2), (2, 4))
    assert str(w) == "f1 f3^-2 f2^4" and len(w) == 7
    assert str(Word.parse("")) == "" and len(Word()) == 0
    assert Word.parse("f1 f1^-1").reduced() == Word()
    assert (w * w.inverse()).reduced() == Word()
    for bad in ["g1", "f1^0", "f", "f1^x"]:
        with pytest.raises(FormatError):
            Word.parse(bad)


def test_word_action_is_right_to_left(t3_chain):
    w = Word.parse("f2 f1")
    f1, f2 = t3_chain.generators[:2]
    assert t3_chain.apply(w, Fr(1, 3)) == f2(f1(Fr(1, 3)))
    assert t3_chain.to_plmap(w) == compose(f2, f1)


# -- chain / ring ------------------------------------------------------------------

def iv(a, b):
    return IntervalSet.interval(Fr(a), Fr(b))


def test_chain_and_ring_examples(t3):
    assert is_ring(t3.supports)
    assert [a.as_pair() for a in t3.arcs] == [(0, Fr(2, 3)), (Fr(1, 3), Fr(7, 9)), (Fr(2, 3), 1),
                                              (Fr(8, 9), Fr(1, 3))]
    assert is_chain([iv(0, Fr(1, 2)), iv(Fr(1, 4), 1)])
    assert not is_chain([iv(0, Fr(1, 2)), iv(Fr(1, 4), Fr(3, 4)), iv(Fr(1, 3), 1)])
    assert not is_chain([iv(0, Fr(1, 2)), iv(Fr(1, 8), Fr(1, 4))])  # nested: J2 - J1 empty
    with pytest.raises(StructureError):
        is_chain([IntervalSet.of((0, Fr(1, 4)), (Fr(1, 2), Fr(3, 4))), iv(0, 1)])
    with pytest.raises(StructureError):
        is_ring([iv(0, Fr(1, 2)), iv(Fr(1, 4), 1)])


def test_family_rejects_multi_arc_support():
    f = PLMap.from_nodes([(0, 0), (Fr(1, 8), Fr(3, 16)), (Fr(1, 4), Fr(1, 4)), (Fr(1, 2), Fr(1, 2)),
                          (Fr(5, 8), Fr(11, 16)), (Fr(3, 4), Fr(3, 4)), (1, 1)])
    assert len(f.support().arcs) == 2
    with pytest.raises(StructureError):
        GeneratingFamily([f])


def test_ring_invariance(t3):
    arcs = t3.supports
    for k in range(4):
        assert is_ring(arcs[k:] + arcs[:k])
    rng = random.Random(3)
    for _ in range(20):
        h = to_plmap(random_pair(3, 5, rng))
        assert is_ring([s.image(h.evaluate) for s in arcs])


# -- F-criterion ---------------------------------------------------------------------

def test_certify_examples():
    t3, t4 = build_family(3), build_family(4)
    c = certify_F_pair(t3.generators[0], t3.generators[1])
    assert c.certified and c.a_prime == Fr(1, 3) and c.b == Fr(2, 3)
    assert c.value == Fr(19, 27)  # the closed form 20/27 is not what the maps give; bound 2/3 holds
    c = certify_F_pair(t4.generators[0], t4.generators[1])
    assert c.certified and c.value == Fr(5, 8) and c.b == Fr(1, 2)


def test_certify_inconclusive_matches_oracle():
    f, g = slow_pair(Fr(1, 32), Fr(1, 64))
    c = certify_F_pair(f, g)
    x = g(f(Fr(1, 4)))
    assert c.value == x and x < Fr(1, 2)
    assert not c.certified and c.verdict == "inconclusive"


def test_certify_pattern_error(t3):
    f1, _, f3, _ = t3.generators
    with pytest.raises(OverlapPatternError):
        certify_F_pair(f1, f3)
    f, g = slow_pair()
    with pytest.raises(OverlapPatternError):
        certify_F_pair(g, f)


def test_certify_wrap_pair_uses_rotation(t3):
    f4, f1 = t3.generators[3], t3.generators[0]
    c = certify_F_pair(f4, f1)
    assert c.conjugator is not None and c.conjugator.kind == "circle" and c.certified
    y_inv = inverse(to_plmap(generator("y", 3)))
    c2 = certify_F_pair(f4, f1, y_inv)
    assert c2.certified and (c2.a, c2.b, c2.a_prime, c2.b_prime) == (Fr(2, 9), Fr(2, 3), Fr(1, 3), 1)


@given(st.integers(0, 10_000))
def test_certify_conjugation_invariance(seed):
    rng = random.Random(seed)
    h = to_plmap(random_pair(3, 6, rng))
    t3 = build_family(3)
    pairs = [(t3.generators[0], t3.generators[1]), slow_pair(Fr(1, 32), Fr(1, 64)), slow_pair()]
    for f, g in pairs:
        base = certify_F_pair(f, g).certified
        assert certify_F_pair(conjugate(h, f), conjugate(h, g)).certified == base


# -- ring groups ------------------------------------------------------------------

@pytest.mark.parametrize("n", [3, 5])
def test_verify_ring_group(n):
    cert = verify_ring_group(build_family(n))
    assert cert.valid and len(cert.pairs) == n + 1
    assert all(p.certified for p in cert.pairs)


def test_verify_ring_group_failure_index(t3):
    narrow = PLMap.from_nodes([(0, 0), (Fr(2, 3), Fr(2, 3)), (Fr(13, 18), Fr(20, 27)), (Fr(7, 9), Fr(7, 9)),
                               (1, 1)])
    gens = list(t3.generators)
    gens[1] = narrow
    cert = verify_ring_group(GeneratingFamily(gens))
    assert not cert.valid and not cert.is_ring and cert.failing_index == 1


def test_verify_ring_group_needs_three(t3):
    with pytest.raises(PreconditionError):
        verify_ring_group(GeneratingFamily(t3.generators[:2]))


# -- stabilization ------------------------------------------------------------------

def slow_family(e=Fr(1, 32), d=Fr(1, 8)):
    f, g = slow_pair(e, d)
    g = PLMap.from_nodes([(0, 0), (Fr(1, 4), Fr(1, 4)), (Fr(1, 2), Fr(1, 2) + d), (1, 1)])
    return GeneratingFamily([f, g])


def test_stabilize(t3_chain):
    N, cert = stabilize(t3_chain, 5)
    assert N == 1 and cert.valid
    fam = slow_family()
    N, cert = stabilize(fam, 10)
    assert N == brute_min_N(*fam.generators, Fr(1, 4), Fr(1, 2)) == 3
    with pytest.raises(NotFoundError):
        stabilize(fam, 0)
    with pytest.raises(NotFoundError) as exc:
        stabilize(fam, 2)
    assert exc.value.best == 2


@given(st.integers(3, 12), st.sampled_from([Fr(1, 64), Fr(1, 32), Fr(1, 16)]),
       st.sampled_from([Fr(1, 64), Fr(1, 16), Fr(1, 8)]))
def test_stabilize_monotone_in_budget(extra, e, d):
    fam = slow_family(e, d)
    oracle = brute_min_N(*fam.generators, Fr(1, 4), Fr(1, 2))
    N, _ = stabilize(fam, oracle + extra)
    assert N == oracle


def test_stabilize_requires_prechain(t3):
    with pytest.raises(PreconditionError):
        stabilize(t3, 3)
    f, _ = slow_pair()
    with pytest.raises(PreconditionError):
        stabilize(GeneratingFamily([f, f]), 3)


# -- expansion ------------------------------------------------------------------

def test_expand_ring(t3):
    N, cert = expand_ring(t3, 16)
    assert N <= 16 and cert.valid and cert.new_family.m == 5
    assert is_ring(cert.new_family.supports)
    assert all(h for _, _, h, _ in cert.inequalities)
    # the touching links are equalities, so the strict reading fails
    assert not all(s for _, _, _, s in cert.inequalities)
    assert replay(cert.to_json()).ok


def test_expand_ring_needs_four(t3):
    ring3 = GeneratingFamily([PLMap.from_nodes([(0, 0), (Fr(1, 3), Fr(1, 2)), (Fr(2, 3), Fr(2, 3)), (1, 1)]),
                              conjugate(PLMap.rotation(Fr(1, 3)),
                                        PLMap.from_nodes([(0, 0), (Fr(1, 3), Fr(1, 2)), (Fr(2, 3), Fr(2, 3)),
                                                          (1, 1)])),
                              conjugate(PLMap.rotation(Fr(2, 3)),
                                        PLMap.from_nodes([(0, 0), (Fr(1, 3), Fr(1, 2)), (Fr(2, 3), Fr(2, 3)),
                                                          (1, 1)]))])
    with pytest.raises(PreconditionError):
        expand_ring(ring3, 4)


# -- shrinking, displacement, pushers ----------------------------------------------------

def test_shrink_example(t3_chain):
    c = shrink_into(t3_chain, (Fr(1, 9), Fr(2, 9)), (Fr(5, 9), Fr(7, 9)), Fr(2, 3))
    assert c.valid and len(c.word) <= 64
    assert c.exponent_sums == [0, 0, 0]
    p, q = c.image
    assert Fr(5, 9) < p and q < Fr(7, 9)
    assert (t3_chain.apply(c.word, Fr(1, 9)), t3_chain.apply(c.word, Fr(2, 9))) == (p, q)


def test_shrink_trivial_and_budget(t3_chain):
    c = shrink_into(t3_chain, (Fr(5, 9), Fr(6, 9) - Fr(1, 81)), (Fr(5, 9) - Fr(1, 81), Fr(7, 9)), Fr(2, 3))
    assert c.word == Word() and c.valid
    with pytest.raises(BudgetExceeded) as exc:
        shrink_into(t3_chain, (Fr(1, 9), Fr(2, 9)), (Fr(13, 18), Fr(5, 6)), Fr(7, 9), budget=2)
    assert exc.value.best is not None


def test_shrink_preconditions(t3_chain, t3):
    with pytest.raises(PreconditionError):
        shrink_into(t3_chain, (Fr(1, 9), Fr(2, 9)), (Fr(1, 2), Fr(3, 5)), Fr(1, 2))
    with pytest.raises(PreconditionError):
        shrink_into(t3, (Fr(1, 9), Fr(2, 9)), (Fr(5, 9), Fr(7, 9)), Fr(2, 3))


@given(st.integers(1, 79), st.integers(1, 79), st.sampled_from([Fr(1, 3), Fr(2, 3), Fr(7, 9)]),
       st.integers(1, 6))
def test_shrink_random(t3_chain, a, b, t, r):
    a, b = min(a, b), max(a, b)
    radius = Fr(r, 54)
    J = (max(t - radius, Fr(0)), min(t + radius, Fr(1)))
    c = shrink_into(t3_chain, (Fr(a, 81), Fr(b, 81)), J, t)
    assert c.valid and not any(c.exponent_sums) and len(c.word) <= 64


def test_displace(t3_chain):
    d = displace(t3_chain, (Fr(1, 9), Fr(2, 9)))
    assert d.valid and not any(d.exponent_sums)
    u, v = d.image
    assert v < Fr(1, 9) or u > Fr(2, 9)


def test_disjoint_pushers(t3_chain):
    K = IntervalSet.interval(Fr(1, 9), Fr(2, 9))
    assert disjoint_pushers(t3_chain, K, 1) == [Word()]
    words = disjoint_pushers(t3_chain, K, 3)
    images = [pushed_image(t3_chain, w, K) for w in words]
    for A, B in itertools.combinations(images, 2):
        assert A.disjoint(B)
    assert all(not any(w.exponent_sums(3)) for w in words)


# -- p1 ------------------------------------------------------------------

def test_p1_examples(t3_chain):
    assert p1(t3_chain, Word.parse("f1^3 f2")) == 3
    assert p1(t3_chain, Word()) == 0
    w1, w2 = Word.parse("f1 f3 f1^-1"), Word.parse("f3")
    assert t3_chain.to_plmap(w1) == t3_chain.to_plmap(w2)
    assert p1(t3_chain, w1) == p1(t3_chain, w2) == 0
    assert p1_consistency(t3_chain, w1, w2)


def test_p1_homomorphism_exhaustive(t3_chain):
    letters = [Word(((i, e),)) for i in (1, 2, 3) for e in (1, -1)]
    words = [Word()] + letters + [a * b for a in letters for b in letters]
    for u in words:
        for v in words:
            assert p1(t3_chain, u * v) == p1(t3_chain, u) + p1(t3_chain, v)


# -- certificates -------------------------------------------------------------------

def test_certificate_roundtrip_and_mutation(t3, t3_chain):
    certs = [verify_ring_group(t3).to_json(),
             certify_F_pair(*t3.generators[:2]).to_json(),
             stabilize(t3_chain, 3)[1].to_json(),
             shrink_into(t3_chain, (Fr(1, 9), Fr(2, 9)), (Fr(5, 9), Fr(7, 9)), Fr(2, 3)).to_json(),
             displace(t3_chain, (Fr(1, 9), Fr(2, 9))).to_json()]
    for doc in certs:
        doc = json.loads(json.dumps(doc))
        assert doc["format"] == "ringkit/1"
        assert replay(doc).ok
    shrink = json.loads(json.dumps(certs[3]))
    shrink["data"]["target"][0] = "1/2"
    r = replay(shrink)
    assert not r.ok and any("margins" in m for m in r.mismatches)
    ring = json.loads(json.dumps(certs[0]))
    ring["data"]["pairs"][0]["value"] = "20/27"
    assert not replay(ring).reproduced


def test_replay_rejects_wrong_family(t3):
    doc = verify_ring_group(t3).to_json()
    with pytest.raises(StructureError):
        replay(doc, build_family(4))
    with pytest.raises(FormatError):
        replay({**doc, "format": "other/9"})
