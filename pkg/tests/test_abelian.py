import random

import pytest

from adorn.abelian import (AbelianInvariants, IntMatrix, abelianization,
                           abelianization_data, exterior_square_rank,
                           is_perfect, relator_matrix, smith_normal_form)
from adorn.fpgroup import parse_presentation
from adorn.zoo import make

from oracles import minor_gcd_diagonal


def snf_checked(rows):
    m = IntMatrix.from_rows(rows) if rows else IntMatrix(0, 0, ())
    d, u, v = smith_normal_form(m)
    assert u.mul(m).mul(v) == d
    assert u.det() in (1, -1)
    assert v.det() in (1, -1)
    diag = list(d.diagonal())
    for i in range(d.rows):
        for j in range(d.cols):
            if i != j:
                assert d.at(i, j) == 0
    assert all(x >= 0 for x in diag)
    for a, b in zip(diag, diag[1:]):
        if a == 0:
            assert b == 0
        else:
            assert b % a == 0
    return diag


def test_snf_example_trivial_cokernel():
    assert snf_checked([[2, 0], [0, 3], [5, 5]]) == [1, 1]


def test_snf_zero_rows():
    m = IntMatrix(0, 3, ())
    d, u, v = smith_normal_form(m)
    assert d.rows == 0 and d.cols == 3
    assert v.det() in (1, -1)


def test_snf_single_entry():
    assert snf_checked([[12]]) == [12]


def test_snf_negative_entries():
    assert snf_checked([[4, 0], [2, -3]]) == [1, 12]


def test_snf_matches_minor_gcd_oracle_random():
    rng = random.Random(20260810)
    for _ in range(120):
        r = rng.randrange(1, 5)
        c = rng.randrange(1, 5)
        rows = [[rng.randrange(-5, 6) for _ in range(c)] for _ in range(r)]
        assert snf_checked(rows) == minor_gcd_diagonal(rows)


def test_abelianization_trefoil():
    inv = abelianization(make("trefoil"))
    assert inv == AbelianInvariants(1, ())
    assert str(inv) == "Z"


def test_abelianization_sl2z():
    inv = abelianization(make("sl2z"))
    assert inv == AbelianInvariants(0, (12,))
    assert str(inv) == "Z/12"
    assert inv.order() == 12


def test_abelianization_triangle_235():
    inv = abelianization(make("triangle", (2, 3, 5)))
    assert inv.is_trivial()
    assert str(inv) == "trivial"


def test_abelianization_free_and_trivial():
    assert abelianization(parse_presentation("< a, b | >")) == AbelianInvariants(2, ())
    assert abelianization(parse_presentation("< | >")).is_trivial()


def test_relator_matrix_orientation():
    p = parse_presentation("< a, b | a^4, a^2 b^-3 >")
    assert relator_matrix(p).to_rows() == [[4, 0], [2, -3]]


def test_exterior_square_rank():
    assert exterior_square_rank(3) == 3
    assert exterior_square_rank(1) == 0
    assert exterior_square_rank(4) == 6
    for r in range(11):
        assert exterior_square_rank(r) == len(
            [(i, j) for i in range(r) for j in range(i + 1, r)])


def test_is_perfect():
    assert is_perfect(make("triangle", (2, 3, 5)))
    assert not is_perfect(parse_presentation("< a | >"))
    assert is_perfect(parse_presentation("< | >"))


def test_divisor_chain_validation():
    with pytest.raises(ValueError):
        AbelianInvariants(0, (4, 2))
    with pytest.raises(ValueError):
        AbelianInvariants(0, (1,))


def test_generator_images_kill_relators():
    # the reported images must send every relator to zero
    for p in (make("sl2z"), make("trefoil"), make("triangle", (2, 4, 6)),
              parse_presentation("< a, b | a^2 b^4 >")):
        data = abelianization_data(p)
        from adorn.abelian import word_exponent_images
        for r in p.relators:
            free, tors = word_exponent_images(p, data, r)
            assert all(x == 0 for x in free)
            assert all(x == 0 for x in tors)
        # and the images must generate the quotient: the subgroup generated
        # by the torsion images has full order (checked for rank 0)
        if data.invariants.rank == 0 and data.invariants.order() <= 4096:
            seen = {tuple(0 for _ in data.invariants.torsion)}
            frontier = list(seen)
            while frontier:
                nxt = []
                for x in frontier:
                    for img in data.torsion_images:
                        y = tuple((a + b) % m for a, b, m in
                                  zip(x, img, data.invariants.torsion))
                        if y not in seen:
                            seen.add(y)
                            nxt.append(y)
                frontier = nxt
            assert len(seen) == data.invariants.order()


def test_abelianization_invariant_under_tietze():
    from adorn.fpgroup import tietze_simplify
    rng = random.Random(4)
    for p in (make("sl2z"), make("trefoil"), make("braid", (4,)),
              make("triangle", (2, 3, 7))):
        inv = abelianization(p)
        simplified, _ = tietze_simplify(p)
        assert abelianization(simplified) == inv
