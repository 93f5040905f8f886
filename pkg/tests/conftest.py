from fractions import Fraction as F
from pathlib import Path

import pytest
from hypothesis import strategies as st

from finstoch import DynSystem, FinSpace, Kernel, discrete, state

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures() -> Path:
    return FIXTURES


@pytest.fixture
def sys1() -> DynSystem:
    """a <-> b swap, c fixed, d falls into c."""
    x = discrete("abcd")
    return DynSystem.from_maps(x, {"t": {"a": "b", "b": "a", "c": "c", "d": "c"}})


@pytest.fixture
def p_mixed(sys1) -> Kernel:
    return state(sys1.space, [F(1, 4), F(1, 4), F(1, 2), 0])


# ---------- hypothesis strategies ----------


@st.composite
def spaces(draw, max_atoms=4, discrete_only=False):
    n_atoms = draw(st.integers(1, max_atoms))
    if discrete_only:
        return discrete([f"x{i}" for i in range(n_atoms)])
    extra = draw(st.integers(0, 2))
    owners = list(range(n_atoms)) + [draw(st.integers(0, n_atoms - 1)) for _ in range(extra)]
    order = draw(st.permutations(range(len(owners))))
    atoms = [[] for _ in range(n_atoms)]
    for point, owner in zip(order, owners):
        atoms[owner].append(point)
    atoms.sort(key=min)
    return FinSpace(tuple(f"x{i}" for i in range(len(owners))), tuple(tuple(a) for a in atoms))


@st.composite
def prob_rows(draw, n):
    weights = draw(st.lists(st.integers(0, 4), min_size=n, max_size=n))
    if not any(weights):
        weights[draw(st.integers(0, n - 1))] = 1
    total = sum(weights)
    return tuple(F(w, total) for w in weights)


@st.composite
def kernels(draw, dom, cod):
    return Kernel(dom, cod, tuple(draw(prob_rows(cod.n_atoms)) for _ in range(dom.n_atoms)))


@st.composite
def zero_one_kernels(draw, dom, cod):
    rows = []
    for _ in range(dom.n_atoms):
        hit = draw(st.integers(0, cod.n_atoms - 1))
        rows.append(tuple(F(int(c == hit)) for c in range(cod.n_atoms)))
    return Kernel(dom, cod, tuple(rows))


@st.composite
def states(draw, space):
    return state(space, draw(prob_rows(space.n_atoms)))
