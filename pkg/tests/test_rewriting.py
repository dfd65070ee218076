import random

import pytest

from adorn.abelian import abelianization
from adorn.cosets import CosetTable, IncompleteTable, commutator_coset_table, todd_coxeter
from adorn.fpgroup import Word, parse_presentation
from adorn.rewriting import (reidemeister_schreier, rewrite_presentation,
                             schreier_transversal, subgroup_word)
from adorn.zoo import make

from oracles import derived_series_quotients, pinv, quaternion_model

A = Word.gen(0)
B = Word.gen(1)


def test_transversal_single_coset():
    t = commutator_coset_table(make("triangle", (2, 3, 5)))
    assert schreier_transversal(t) == (Word(),)


def test_transversal_dinf():
    p = make("dihedral_inf")
    t = todd_coxeter(p, [A * B])
    assert schreier_transversal(t) == (Word(), A)


def test_transversal_s3():
    p = parse_presentation("< a, b | a^2, b^2, (a b)^3 >")
    t = todd_coxeter(p, [A])
    assert schreier_transversal(t) == (Word(), B, B * A)


def test_transversal_prefix_closed():
    p = make("sl2z")
    t = commutator_coset_table(p)
    words = schreier_transversal(t)
    reps = set(words)
    for w in words:
        for k in range(len(w)):
            assert Word(w.letters[:k]) in reps


def test_transversal_requires_complete():
    t = CosetTable(1, [[None, None]], complete=False)
    with pytest.raises(IncompleteTable):
        schreier_transversal(t)


def test_schreier_generator_count():
    for p, sub in [
        (parse_presentation("< a, b | a^2, b^2, (a b)^3 >"), [A]),
        (make("sl2z"), None),
        (make("dihedral_inf"), None),
    ]:
        t = todd_coxeter(p, sub) if sub else commutator_coset_table(p)
        raw = rewrite_presentation(p, t)
        assert raw.n_generators == t.n_cosets * p.n_generators - (t.n_cosets - 1)


def test_dinf_commutator_subgroup_is_z():
    p = make("dihedral_inf")
    out, hit = reidemeister_schreier(p, commutator_coset_table(p))
    assert not hit
    assert out.n_generators == 1 and out.relators == ()


def test_sl2z_commutator_subgroup_free_rank_2():
    p = make("sl2z")
    t = commutator_coset_table(p)
    assert t.n_cosets == 12
    out, hit = reidemeister_schreier(p, t)
    assert not hit
    assert out.n_generators == 2 and out.relators == ()


def test_q8_commutator_subgroup_is_z2():
    p = parse_presentation("< a, b | a^4, a^2 b^-2, b^-1 a b a >")
    out, hit = reidemeister_schreier(p, commutator_coset_table(p))
    assert not hit
    assert out.n_generators == 1
    assert [len(r) for r in out.relators] == [2]


def random_subgroup_table(rng, n_gens, degree) -> CosetTable | None:
    """Coset table of the stabilizer of 0 under a random homomorphism of the
    free group into permutations of the given degree (orbit of 0)."""
    images = [tuple(rng.sample(range(degree), degree)) for _ in range(n_gens)]
    inverses = [pinv(g) for g in images]
    # BFS orbit of 0, relabeling points to definition order
    order = {0: 0}
    queue = [0]
    qi = 0
    while qi < len(queue):
        x = queue[qi]
        qi += 1
        for g in range(n_gens):
            for img in (images[g], inverses[g]):
                if img[x] not in order:
                    order[img[x]] = len(order)
                    queue.append(img[x])
    rows = []
    for x in queue:
        row = []
        for g in range(n_gens):
            row.append(order[images[g][x]])
            row.append(order[inverses[g][x]])
        rows.append(row)
    return CosetTable(n_gens, rows, complete=True)


def test_nielsen_schreier_rank_formula():
    rng = random.Random(99)
    for _ in range(30):
        n = rng.choice((2, 3))
        free = parse_presentation("< a, b | >" if n == 2 else "< a, b, c | >")
        t = random_subgroup_table(rng, n, rng.randrange(2, 13))
        index = t.n_cosets
        out, hit = reidemeister_schreier(free, t)
        assert not hit
        assert out.relators == ()
        assert out.n_generators == index * (n - 1) + 1


S3_ROT = parse_presentation("< a, b | a^2, b^3, (a b)^2 >")
Q8 = parse_presentation("< a, b | a^4, a^2 b^-2, b^-1 a b a >")


@pytest.mark.parametrize("pres,model", [
    (parse_presentation("< a, b | a^2, b^2, (a b)^3 >"), [(1, 0, 2), (0, 2, 1)]),
    (Q8, quaternion_model()[0]),
    (parse_presentation("< a, b | a^2, b^3, (a b)^3 >"), [(1, 0, 3, 2), (1, 2, 0, 3)]),
    (parse_presentation("< a, b | a^4, b^2, (a b)^2 >"), [(1, 2, 3, 0), (0, 3, 2, 1)]),
])
def test_second_derived_quotient_matches_permutation_oracle(pres, model):
    # abelianization of the rewritten commutator subgroup == G1/G2
    table = commutator_coset_table(pres)
    sub, hit = reidemeister_schreier(pres, table)
    assert not hit
    got = abelianization(sub)
    oracle = derived_series_quotients(model)
    expected = oracle[1] if len(oracle) > 1 else ()
    assert got.rank == 0
    assert got.torsion == tuple(expected)


def test_subgroup_word_rewriting():
    p = S3_ROT
    t = todd_coxeter(p, [B])
    w = subgroup_word(p, t, B)
    # b lies in the subgroup; its rewriting is a word in Schreier generators
    sub = rewrite_presentation(p, t)
    assert w.max_generator() < sub.n_generators
    with pytest.raises(ValueError):
        subgroup_word(p, t, A)  # a is not in <b>


def test_rewritten_relators_land_in_subgroup():
    p = make("sl2z")
    t = commutator_coset_table(p)
    raw = rewrite_presentation(p, t)
    # every raw relator is a consequence: its abelianized image vanishes
    inv = abelianization(raw)
    assert inv == abelianization(reidemeister_schreier(p, t).presentation)
