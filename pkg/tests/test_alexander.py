import random

import pytest

from adorn.alexander import (DeficiencyMismatch, GroupRingElement, LaurentPoly,
                             NotKnotLike, alexander_polynomial, fox_derivative,
                             knot_adorability_report, laurent_gcd)
from adorn.fpgroup import Word, free_reduce, parse_presentation, tietze_simplify
from adorn.zoo import make

A = Word.gen(0)
B = Word.gen(1)


def poly(d):
    return LaurentPoly(d)


def left_mul(w: Word, elem: GroupRingElement) -> GroupRingElement:
    return GroupRingElement({free_reduce(w * k): c for k, c in elem.terms.items()})


def test_fox_axioms():
    assert fox_derivative(A, 0) == GroupRingElement({Word(): 1})
    assert fox_derivative(B, 0) == GroupRingElement({})
    assert fox_derivative(A.inverse(), 0) == GroupRingElement({A.inverse(): -1})


def test_fox_product_rule_random():
    rng = random.Random(31)
    for _ in range(150):
        u = Word((rng.randrange(3), rng.choice((1, -1)))
                 for _ in range(rng.randrange(0, 7)))
        v = Word((rng.randrange(3), rng.choice((1, -1)))
                 for _ in range(rng.randrange(0, 7)))
        g = rng.randrange(3)
        assert fox_derivative(u * v, g) == \
            fox_derivative(u, g) + left_mul(u, fox_derivative(v, g))


def test_fox_trefoil_example():
    w = make("trefoil").relators[0]  # a b a b^-1 a^-1 b^-1
    d = fox_derivative(w, 0)
    expected = GroupRingElement({
        Word(): 1,
        A * B: 1,
        A * B * A * B.inverse() * A.inverse(): -1,
    })
    assert d == expected


def test_laurent_normalization_and_format():
    p = poly({-1: -2, 1: 3, 0: -1})
    n = p.normalized()
    assert n.min_exp() == 0
    assert n.coeffs[n.max_exp()] > 0
    assert str(poly({2: 1, 1: -1, 0: 1})) == "t^2 - t + 1"
    assert str(poly({0: 1})) == "1"
    assert str(poly({2: 1, 1: -3, 0: 1})) == "t^2 - 3t + 1"


def test_laurent_gcd():
    # (1+t^3) and (1+t^2+t^4) share exactly t^2-t+1
    f = poly({0: 1, 3: 1})
    g = poly({0: 1, 2: 1, 4: 1})
    assert laurent_gcd(f, g) == poly({2: 1, 1: -1, 0: 1})
    # gcd with zero and with units
    assert laurent_gcd(poly({}), f) == f.normalized()
    assert laurent_gcd(poly({5: 1}), f) == poly({0: 1})
    # content is respected
    assert laurent_gcd(poly({0: 6}), poly({0: 4})) == poly({0: 2})


def test_unknot():
    assert alexander_polynomial(parse_presentation("< a | >")) == LaurentPoly.one()


def test_trefoil_polynomial():
    assert alexander_polynomial(make("trefoil")) == poly({2: 1, 1: -1, 0: 1})


def test_figure_eight_polynomial():
    assert alexander_polynomial(make("figure_eight")) == poly({2: 1, 1: -3, 0: 1})


def test_torus_knot_via_minor_gcd_fallback():
    # no generator of < x, y | x^2 y^-3 > maps to t^{+-1}; the first
    # elementary ideal still pins the trefoil polynomial
    assert alexander_polynomial(make("torus_knot", (2, 3))) == poly({2: 1, 1: -1, 0: 1})


def test_torus_knot_25():
    # (2,5) torus knot: t^4 - t^3 + t^2 - t + 1
    got = alexander_polynomial(make("torus_knot", (2, 5)))
    assert got == poly({4: 1, 3: -1, 2: 1, 1: -1, 0: 1})


def test_not_knot_like():
    with pytest.raises(NotKnotLike):
        alexander_polynomial(make("cyclic", (5,)))
    with pytest.raises(NotKnotLike):
        alexander_polynomial(make("surface", (1,)))
    with pytest.raises(NotKnotLike):
        alexander_polynomial(make("klein_bottle"))  # Z + Z/2


def test_deficiency_mismatch():
    rel = make("trefoil").relators[0]
    p = parse_presentation("< a, b | a b a b^-1 a^-1 b^-1, b a b a^-1 b^-1 a^-1 >")
    with pytest.raises(DeficiencyMismatch):
        alexander_polynomial(p)


def corpus():
    return [
        parse_presentation("< a | >"),
        make("trefoil"),
        make("figure_eight"),
        make("torus_knot", (2, 3)),
        make("torus_knot", (2, 5)),
        make("torus_knot", (3, 4)),
    ]


def test_corpus_determinant_one_at_unity():
    for p in corpus():
        delta = alexander_polynomial(p)
        assert abs(delta.evaluate(1)) == 1


def test_corpus_symmetry():
    for p in corpus():
        assert alexander_polynomial(p).is_symmetric()


def test_corpus_even_degree():
    for p in corpus():
        assert alexander_polynomial(p).degree_span() % 2 == 0


def test_invariance_under_tietze():
    for p in corpus():
        if p.n_generators < 2:
            continue
        delta = alexander_polynomial(p)
        # pad with a redundant generator c = a b and simplify back
        names = p.generator_names + ("zz",)
        extra = Word.gen(p.n_generators) * (A * B).inverse()
        from adorn.fpgroup import GroupPresentation
        padded = GroupPresentation(names, p.relators + (extra,))
        assert alexander_polynomial(padded) == delta  # still deficiency one
        simplified, _ = tietze_simplify(padded)
        assert alexander_polynomial(simplified) == delta


def test_knot_report_trefoil():
    rep = knot_adorability_report(make("trefoil"))
    assert rep.verdict == "NotAdorable"
    assert rep.degree == 2
    assert rep.derived_quotient_rank == 2
    assert rep.rank_provenance == "cited"
    assert not rep.adorable


def test_knot_report_unknot():
    rep = knot_adorability_report(parse_presentation("< a | >"))
    assert rep.adorable
    assert rep.polynomial == LaurentPoly.one()


def test_knot_report_torus_knot_not_adorable():
    rep = knot_adorability_report(make("torus_knot", (2, 3)))
    assert rep.verdict == "NotAdorable"


def test_knot_report_rank_note_for_degree_three_plus():
    # (3,4) torus knot has degree-6 polynomial: the rank >= 3 note appears
    rep = knot_adorability_report(make("torus_knot", (3, 4)))
    assert rep.degree == 6
    assert any("rank >= 3" in n for n in rep.notes)
