from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from finstoch import (
    FinSpace,
    Kernel,
    as_equal,
    compose,
    copy,
    delete,
    discrete,
    identity,
    is_deterministic,
    is_independent,
    kernel_from_function,
    marginal,
    point_mass,
    product,
    state,
    swap,
    tensor,
    unit_space,
)
from finstoch.errors import CopyNeedsPoints, NotAProduct, NotMeasurable, ParseError, SpaceMismatch
from finstoch.kernel import structural

from .conftest import kernels, spaces

AB = discrete("ab")
CD = discrete("cd")
I = unit_space()


def dense_matmul(h_rows, k_rows):
    """Reference Chapman-Kolmogorov sum on plain nested lists."""
    inner = len(h_rows)
    return [
        [sum(row[m] * h_rows[m][c] for m in range(inner)) for c in range(len(h_rows[0]))]
        for row in k_rows
    ]


def dense_kron(a, b):
    return [[x * y for x in ra for y in rb] for ra in a for rb in b]


# ---------- construction ----------


def test_rows_must_sum_to_one():
    with pytest.raises(ParseError, match="row"):
        Kernel(I, AB, [[F(1, 2), F(1, 3)]])


def test_negative_entries_rejected():
    with pytest.raises(ParseError):
        Kernel(I, AB, [[F(3, 2), F(-1, 2)]])


def test_floats_rejected():
    with pytest.raises(ParseError):
        Kernel(I, AB, [[0.5, 0.5]])


def test_shape_checked():
    with pytest.raises(ParseError):
        Kernel(I, AB, [[1]])
    with pytest.raises(ParseError):
        Kernel(AB, AB, [[1, 0]])


def test_kernels_are_immutable_and_hashable():
    k = state(AB, [F(1, 2), F(1, 2)])
    with pytest.raises(AttributeError):
        k.dom = CD
    assert hash(k) == hash(state(AB, [F(1, 2), F(1, 2)]))


# ---------- compose / tensor ----------


@given(spaces(), spaces())
def test_identity_laws(x, y):
    k = Kernel(x, y, [[F(int(c == 0)) for c in range(y.n_atoms)]] * x.n_atoms)
    assert compose(identity(y), k) == k
    assert compose(k, identity(x)) == k


def test_swap_fixes_uniform_state():
    flip = Kernel(AB, AB, [[0, 1], [1, 0]])
    uniform = state(AB, [F(1, 2), F(1, 2)])
    assert compose(flip, uniform) == uniform


def test_compose_hand_sum():
    k = state(AB, [F(1, 2), F(1, 2)])
    h = Kernel(AB, AB, [[1, 0], [F(1, 3), F(2, 3)]])
    assert compose(h, k).probs == (F(2, 3), F(1, 3))
    assert (h @ k) == compose(h, k)


def test_compose_space_mismatch():
    with pytest.raises(SpaceMismatch):
        compose(identity(AB), identity(CD))


def test_tensor_of_identities():
    assert tensor(identity(AB), identity(CD)) == identity(product(AB, CD))


def test_tensor_of_states_is_product_measure():
    t = tensor(state(AB, [F(1, 2), F(1, 2)]), state(CD, [F(1, 3), F(2, 3)]))
    assert t.probs == (F(1, 6), F(1, 3), F(1, 6), F(1, 3))
    assert t.dom == product(I, I)


@given(st.data())
def test_interchange_law_on_2x2(data):
    x = discrete("ab")
    f, k, g, h = (data.draw(kernels(x, x)) for _ in range(4))
    lhs = compose(tensor(f, g), tensor(k, h))
    rhs = tensor(compose(f, k), compose(g, h))
    assert lhs == rhs
    # Both sides by brute-force sums.
    expected = dense_kron(
        dense_matmul([list(r) for r in f.rows], [list(r) for r in k.rows]),
        dense_matmul([list(r) for r in g.rows], [list(r) for r in h.rows]),
    )
    assert [list(r) for r in lhs.rows] == expected


@given(st.data())
def test_compose_matches_dense_oracle(data):
    x, y, z = (data.draw(spaces(max_atoms=4)) for _ in range(3))
    k = data.draw(kernels(x, y))
    h = data.draw(kernels(y, z))
    assert [list(r) for r in compose(h, k).rows] == dense_matmul(
        [list(r) for r in h.rows], [list(r) for r in k.rows]
    )


# ---------- structure maps ----------


@given(st.data())
def test_delete_is_terminal(data):
    x, y = data.draw(spaces()), data.draw(spaces())
    k = data.draw(kernels(x, y))
    assert compose(delete(y), k) == delete(x)


def test_copy_on_discrete_pair():
    c = copy(AB)
    assert c.cod == product(AB, AB)
    assert c.rows == ((1, 0, 0, 0), (0, 0, 0, 1))
    assert is_deterministic(c)


def test_swap_after_copy_is_copy():
    x = discrete("abc")
    assert compose(swap(x, x), copy(x)) == copy(x)


def test_copy_needs_singleton_atoms():
    with pytest.raises(CopyNeedsPoints):
        copy(FinSpace(("a", "b"), ((0, 1),)))


def test_structural_dispatch():
    assert structural("swap", AB, CD) == swap(AB, CD)
    assert structural("delete", AB) == delete(AB)
    with pytest.raises(ValueError):
        structural("nope", AB)


# ---------- marginals / independence ----------


def test_marginal_of_product_state():
    a, b = state(AB, [F(1, 5), F(4, 5)]), state(CD, [F(1, 3), F(2, 3)])
    joint = tensor(a, b)
    assert marginal(joint, "left").probs == a.probs
    assert marginal(joint, "right").probs == b.probs


def test_marginals_of_correlated_state():
    p = state(product(AB, CD), [F(1, 2), 0, 0, F(1, 2)])
    assert marginal(p, "left").probs == (F(1, 2), F(1, 2))
    assert marginal(p, "right").probs == (F(1, 2), F(1, 2))
    assert not is_independent(p)


def test_marginal_of_point_mass():
    p = point_mass(product(AB, CD), "(a,c)")
    assert marginal(p, "left") == point_mass(AB, "a")
    assert marginal(p, "right") == point_mass(CD, "c")
    assert is_independent(p)


def test_marginal_needs_product():
    with pytest.raises(NotAProduct):
        marginal(state(AB, [1, 0]), "left")


def test_independence_of_tensor_of_states():
    assert is_independent(tensor(state(AB, [F(1, 3), F(2, 3)]), state(CD, [F(1, 7), F(6, 7)])))


# ---------- determinism ----------


def test_determinism_examples():
    x = discrete("abc")
    assert is_deterministic(kernel_from_function({"a": "b", "b": "c", "c": "c"}, x, x))
    assert not is_deterministic(state(AB, [F(1, 2), F(1, 2)]))


def test_zero_one_state_on_coarse_space_is_deterministic():
    coarse = FinSpace(("a", "b", "c"), ((0, 1), (2,)))
    assert is_deterministic(state(coarse, [1, 0]))


# ---------- as_equal ----------


def test_as_equal_examples():
    f = Kernel(AB, CD, [[1, 0], [0, 1]])
    g = Kernel(AB, CD, [[1, 0], [1, 0]])
    assert as_equal(state(AB, [F(1, 2), F(1, 2)]), f, f)
    assert as_equal(point_mass(AB, "a"), f, g)
    assert not as_equal(state(AB, [F(1, 2), F(1, 2)]), f, g)


def test_as_equal_shape_mismatch():
    with pytest.raises(SpaceMismatch):
        as_equal(point_mass(CD, "c"), identity(AB), identity(AB))


# ---------- kernel_from_function ----------


def test_kernel_from_function_examples():
    x = discrete("abc")
    assert kernel_from_function({"a": "a", "b": "b", "c": "c"}, x, x) == identity(x)
    const = kernel_from_function({"a": "b", "b": "b", "c": "b"}, x, x)
    assert set(const.rows) == {(0, 1, 0)}
    f = kernel_from_function({"a": "c", "b": "c"}, AB, CD)
    assert f.rows == ((1, 0), (1, 0))


def test_kernel_from_function_needs_measurability():
    coarse = FinSpace(("a", "b"), ((0, 1),))
    with pytest.raises(NotMeasurable):
        kernel_from_function({"a": "c", "b": "d"}, coarse, CD)
