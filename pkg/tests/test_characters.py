from fractions import Fraction

import pytest

from treespace.characters import (
    Character,
    CharacterError,
    induce,
    induce_by_cosets,
    inner_product,
    regular,
    restrict,
    sign_character,
    tensor_sign,
    trivial,
)
from treespace.perm import partitions


def test_induced_sign_from_s2():
    chi = induce(sign_character(2))
    assert chi.table() == {"3": 0, "2+1": -1, "1+1+1": 3}


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_induction_formula_matches_coset_sum(m):
    for chi in (trivial(m), sign_character(m), regular(m)):
        assert induce(chi) == induce_by_cosets(chi)


def test_sign_twist_is_an_involution():
    chi = regular(4) + sign_character(4)
    assert tensor_sign(tensor_sign(chi)) == chi


def test_regular_character():
    for m in range(1, 6):
        assert inner_product(regular(m), trivial(m)) == 1
        assert restrict(regular(m)) == Character.from_function(m - 1, lambda p: m * regular(m - 1)[p])


def test_orthonormality_of_trivial_and_sign():
    assert inner_product(trivial(5), sign_character(5)) == 0
    assert inner_product(sign_character(5), sign_character(5)) == Fraction(1)


def test_frobenius_reciprocity():
    for m in range(1, 5):
        a, b = sign_character(m), regular(m + 1) - trivial(m + 1)
        assert inner_product(induce(a), b) == inner_product(a, restrict(b))


def test_table_round_trip_and_errors():
    chi = regular(3)
    assert Character.from_table(3, chi.table()) == chi
    assert chi.degree == 6
    with pytest.raises(CharacterError):
        chi + regular(4)
    with pytest.raises(CharacterError):
        Character.from_mapping(3, {p: 0 for p in partitions(3)[:-1]})


def test_dimension_bookkeeping_at_three():
    # index 4 times dim Lie_3 = dim Lie_4 + dim of the extension
    assert 4 * 2 == 6 + 2
