from itertools import combinations

import pytest
from hypothesis import given

from finstoch import (
    FinSpace,
    compose,
    discrete,
    identity,
    indistinguishability_quotient,
    is_deterministic,
    product,
    unit_space,
)
from finstoch.errors import NotMeasurable, ParseError
from finstoch.kernel import associator, left_unitor, right_unitor
from finstoch.laws import inverse
from finstoch.space import indistinguishability_relation

from .conftest import spaces


def test_product_with_unit_is_bijective_to_factor():
    y = FinSpace(("a", "b", "c"), ((0, 2), (1,)))
    for prod in (product(unit_space(), y), product(y, unit_space())):
        assert len(prod) == len(y)
        assert prod.n_atoms == y.n_atoms
        assert [len(a) for a in prod.atoms] == [len(a) for a in y.atoms]


def test_product_of_discrete_spaces():
    prod = product(discrete("ab"), discrete("xyz"))
    assert len(prod) == 6
    assert prod.atoms == tuple((i,) for i in range(6))
    assert prod.carrier[:3] == ("(a,x)", "(a,y)", "(a,z)")


def test_product_with_coarse_factor():
    coarse = FinSpace(("a", "b"), ((0, 1),))
    prod = product(coarse, discrete("cd"))
    # Points (a,c)=0 (a,d)=1 (b,c)=2 (b,d)=3; rectangles {a,b}x{c}, {a,b}x{d}.
    assert len(prod) == 4
    assert prod.atoms == ((0, 2), (1, 3))


@pytest.mark.parametrize(
    "atoms, fragment",
    [
        (((0, 1), (1, 2)), "index 1"),
        (((0,), (2,)), "carrier index 1"),
        (((0, 1, 2), ()), "atoms[1] is empty"),
        (((0, 1, 5),), "index 5"),
    ],
)
def test_invalid_partitions_name_the_index(atoms, fragment):
    with pytest.raises(ParseError, match=fragment.replace("[", r"\[").replace("]", r"\]")):
        FinSpace(("a", "b", "c"), atoms)


def test_duplicate_labels_rejected():
    with pytest.raises(ParseError, match="duplicate"):
        FinSpace(("a", "a"), ((0,), (1,)))


def test_atoms_in_rejects_cut_atoms():
    x = FinSpace(("a", "b", "c"), ((0, 1), (2,)))
    assert x.atoms_in([0, 1]) == (0,)
    assert x.atoms_in([]) == ()
    with pytest.raises(NotMeasurable):
        x.atoms_in([0])


def test_quotient_of_discrete_space_is_itself():
    x = discrete("abc")
    quotient, q, h = indistinguishability_quotient(x)
    assert quotient == x
    assert q == identity(x) and h == identity(x)


def test_quotient_of_coarse_space():
    x = FinSpace(("a", "b", "c"), ((0, 1), (2,)))
    quotient, q, h = indistinguishability_quotient(x)
    assert quotient.is_discrete and len(quotient) == 2
    # The atom {a,b} is row 0 of q and goes to the first quotient point.
    assert q.rows == ((1, 0), (0, 1))
    assert compose(h, q) == identity(x)
    assert compose(q, h) == identity(quotient)


def test_quotient_of_unit():
    quotient, q, h = indistinguishability_quotient(unit_space())
    assert quotient == unit_space()
    assert q == identity(unit_space()) == h


@given(spaces(max_atoms=5))
def test_quotient_kernels_are_inverse_isomorphisms(x):
    quotient, q, h = indistinguishability_quotient(x)
    assert compose(h, q) == identity(x)
    assert compose(q, h) == identity(quotient)
    assert is_deterministic(q) and is_deterministic(h)


@given(spaces(max_atoms=5))
def test_indistinguishability_matches_brute_force(x):
    relation = indistinguishability_relation(x)
    # Every measurable set is a union of atoms; enumerate them all.
    measurable = [
        {i for a in chosen for i in a}
        for size in range(x.n_atoms + 1)
        for chosen in combinations(x.atoms, size)
    ]
    for i in range(len(x)):
        for j in range(len(x)):
            same = all((i in s) == (j in s) for s in measurable)
            assert relation.related(i, j) == same


@given(spaces(max_atoms=3), spaces(max_atoms=3), spaces(max_atoms=2))
def test_product_associative_and_unital_up_to_deterministic_iso(x, y, z):
    a = associator(x, y, z)
    assert is_deterministic(a)
    assert compose(inverse(a), a) == identity(a.dom)
    assert compose(a, inverse(a)) == identity(a.cod)
    for u in (left_unitor(x), right_unitor(x)):
        assert is_deterministic(u)
        assert compose(inverse(u), u) == identity(u.dom)
