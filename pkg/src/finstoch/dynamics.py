"""Finite dynamical systems, invariant sigma-algebras and ergodic decomposition.

A :class:`DynSystem` is presented by a finite set of named endo-kernels on a
space; all invariance checks are made against the generators only, which is
enough for the monoid they generate.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .disintegration import Decomposition, bayes_invert
from .errors import (
    NotDeterministicSystem,
    NotInvariant,
    RowsDisagree,
    SpaceMismatch,
    UnsupportedGenerators,
)
from .kernel import (
    ONE,
    ZERO,
    Kernel,
    as_equal,
    compose,
    is_deterministic,
    kernel_from_function,
    state,
)
from .space import FinSpace, PointRelation, discrete

__all__ = [
    "DynSystem",
    "InvariantSigma",
    "is_left_invariant",
    "is_right_invariant",
    "is_invariant_set",
    "invariant_sigma",
    "factor_through_quotient",
    "is_ergodic",
    "ergodicity_witness",
    "is_as_ergodic",
    "ergodic_decomposition",
    "enumerate_ergodic",
    "zigzag_relation",
    "orbit_space_isomorphism",
    "to_dot",
]


@dataclass(frozen=True)
class DynSystem:
    """A space together with named generator kernels ``space -> space``."""

    space: FinSpace
    generators: tuple[tuple[str, Kernel], ...]

    def __post_init__(self):
        gens = self.generators
        if isinstance(gens, Mapping):
            gens = tuple(gens.items())
        gens = tuple((str(name), k) for name, k in gens)
        names = [name for name, _ in gens]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate generator names in {names}")
        for name, k in gens:
            if k.dom != self.space or k.cod != self.space:
                raise SpaceMismatch(f"generator {name!r} is not an endo-kernel of the space")
        object.__setattr__(self, "generators", gens)

    @classmethod
    def from_maps(
        cls, space: FinSpace, maps: Mapping[str, Mapping[str, str] | Sequence[int]]
    ) -> DynSystem:
        return cls(
            space,
            tuple((name, kernel_from_function(m, space, space)) for name, m in maps.items()),
        )

    @property
    def kernels(self) -> tuple[Kernel, ...]:
        return tuple(k for _, k in self.generators)

    @cached_property
    def deterministic(self) -> bool:
        """All generators are zero-one kernels."""
        return all(is_deterministic(k) for k in self.kernels)

    @cached_property
    def bijective(self) -> bool:
        """All generators are permutation matrices on the atoms."""
        if not self.deterministic:
            return False
        for k in self.kernels:
            hit = [row.index(ONE) for row in k.rows]
            if len(set(hit)) != len(hit):
                return False
        return True

    def image(self, k: Kernel, atom: int) -> int:
        """Target atom of ``atom`` under a zero-one generator."""
        return k.rows[atom].index(ONE)


@dataclass(frozen=True)
class InvariantSigma:
    """The invariant sigma-algebra of a system and its quotient cocone.

    ``quotient_space`` has the same carrier as the system's space; its atoms
    are the minimal invariant sets.  ``cocone`` is ``r(A|x) = 1_A(x)``.
    """

    system: DynSystem
    quotient_space: FinSpace
    cocone: Kernel

    def __post_init__(self):
        for atom in self.quotient_space.atoms:
            if not is_invariant_set(atom, self.system):
                raise AssertionError(f"quotient atom {list(atom)} is not invariant")

    def atom_containing(self, point: int) -> int:
        return self.quotient_space.atom_of[point]


class _UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, a: int) -> int:
        root = a
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[a] != root:
            self.parent[a], a = root, self.parent[a]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def _check_cod(c: Kernel, sys: DynSystem) -> None:
    if c.cod != sys.space:
        raise SpaceMismatch("kernel must land in the system's space")


def is_left_invariant(c: Kernel, sys: DynSystem) -> bool:
    """``m . c == c`` for every generator ``m``."""
    _check_cod(c, sys)
    return all(compose(m, c) == c for m in sys.kernels)


def is_right_invariant(s: Kernel, sys: DynSystem) -> bool:
    """``s . m == s`` for every generator ``m``."""
    if s.dom != sys.space:
        raise SpaceMismatch("observable must start at the system's space")
    return all(compose(s, m) == s for m in sys.kernels)


def is_invariant_set(points: Iterable[int], sys: DynSystem) -> bool:
    """Strict invariance: ``m(A|x) = 1_A(x)`` for every generator and point.

    Raises :class:`~finstoch.errors.NotMeasurable` if ``points`` is not a
    union of atoms.
    """
    inside = set(sys.space.atoms_in(points))
    for m in sys.kernels:
        for a, row in enumerate(m.entries):
            mass = sum((v for b, v in row if b in inside), ZERO)
            if mass != (ONE if a in inside else ZERO):
                return False
    return True


def invariant_sigma(sys: DynSystem) -> InvariantSigma:
    """Invariant sigma-algebra as weak components of the support graph.

    Two atoms are joined when some generator moves positive mass from one to
    the other.  For functional generators the components are the zig-zag
    classes of the action.
    """
    space = sys.space
    uf = _UnionFind(space.n_atoms)
    for m in sys.kernels:
        for a, row in enumerate(m.rows):
            for b, v in enumerate(row):
                if v and a != b:
                    uf.union(a, b)
    groups: dict[int, list[int]] = {}
    for a in range(space.n_atoms):
        groups.setdefault(uf.find(a), []).extend(space.atoms[a])
    blocks = sorted((tuple(sorted(pts)) for pts in groups.values()), key=lambda b: b[0])
    quotient = FinSpace(space.carrier, tuple(blocks))
    cocone = Kernel(
        space,
        quotient,
        tuple(
            tuple(ONE if quotient.atom_of[atom[0]] == c else ZERO for c in range(len(blocks)))
            for atom in space.atoms
        ),
    )
    return InvariantSigma(sys, quotient, cocone)


def _require_deterministic(sys: DynSystem) -> None:
    if not sys.deterministic:
        bad = next(name for name, k in sys.generators if not is_deterministic(k))
        raise NotDeterministicSystem(f"generator {bad!r} is not deterministic")


def factor_through_quotient(
    s: Kernel, sys: DynSystem, sigma: InvariantSigma | None = None
) -> Kernel:
    """The unique ``s~: X_inv -> S`` with ``s~ . r == s`` for invariant ``s``."""
    _require_deterministic(sys)
    if not is_right_invariant(s, sys):
        raise NotInvariant("observable is not right-invariant")
    sigma = sigma or invariant_sigma(sys)
    space = sys.space
    rows = []
    for block in sigma.quotient_space.atoms:
        members = space.atoms_in(block)
        candidates = {s.rows[a] for a in members}
        if len(candidates) != 1:
            raise RowsDisagree(f"observable is not constant on quotient atom {list(block)}")
        rows.append(s.rows[members[0]])
    return Kernel(sigma.quotient_space, s.cod, tuple(rows))


def _is_ergodic_row(p: Kernel, sys: DynSystem, sigma: InvariantSigma) -> bool:
    if not is_left_invariant(p, sys):
        return False
    via_quotient = is_deterministic(compose(sigma.cocone, p))
    one_block = any(p.mass(block) == 1 for block in sigma.quotient_space.atoms)
    assert via_quotient == one_block, "ergodicity tests disagree"
    return via_quotient


def is_ergodic(p: Kernel, sys: DynSystem, sigma: InvariantSigma | None = None) -> bool:
    """Invariant state whose push-forward to the quotient is zero-one."""
    _check_cod(p, sys)
    return _is_ergodic_row(p, sys, sigma or invariant_sigma(sys))


def ergodicity_witness(
    p: Kernel, sys: DynSystem, sigma: InvariantSigma | None = None
) -> dict | None:
    """Explain why ``p`` is not ergodic, or return None if it is."""
    _check_cod(p, sys)
    sigma = sigma or invariant_sigma(sys)
    for name, m in sys.generators:
        moved = compose(m, p)
        if moved != p:
            atom = next(c for c, (u, v) in enumerate(zip(moved.probs, p.probs)) if u != v)
            return {
                "reason": "not invariant",
                "generator": name,
                "atom": sys.space.atom_label(atom),
                "before": str(p.probs[atom]),
                "after": str(moved.probs[atom]),
            }
    for block in sigma.quotient_space.atoms:
        mass = p.mass(block)
        if 0 < mass < 1:
            return {
                "reason": "invariant set with mass strictly between 0 and 1",
                "set": [sys.space.carrier[i] for i in block],
                "mass": str(mass),
            }
    return None


def is_as_ergodic(
    k: Kernel, q: Kernel, sys: DynSystem, sigma: InvariantSigma | None = None
) -> bool:
    """Whether the family ``k: Y -> X`` is ``q``-almost surely ergodic."""
    _check_cod(k, sys)
    if q.cod != k.dom:
        raise SpaceMismatch("q must be a state on the domain of k")
    sigma = sigma or invariant_sigma(sys)
    invariant = all(as_equal(q, compose(m, k), k) for m in sys.kernels)
    pushed = compose(sigma.cocone, k)
    charged = q.support()
    zero_one = all(v == 0 or v == 1 for y in charged for v in pushed.rows[y])
    verdict = invariant and zero_one

    row_wise = all(
        _is_ergodic_row(state(sys.space, k.rows[y]), sys, sigma) for y in charged
    )
    assert verdict == row_wise, "almost-sure ergodicity tests disagree"
    return verdict


def ergodic_decomposition(
    p: Kernel, sys: DynSystem, sigma: InvariantSigma | None = None
) -> Decomposition:
    """Write an invariant state as a mixture of ergodic states.

    ``q`` is the push-forward of ``p`` to the quotient and ``k`` is the
    Bayesian inverse of the cocone, i.e. ``p`` conditioned on each invariant
    atom.
    """
    _require_deterministic(sys)
    _check_cod(p, sys)
    if not is_left_invariant(p, sys):
        raise NotInvariant("state is not invariant under the dynamics")
    sigma = sigma or invariant_sigma(sys)
    return Decomposition(
        q=compose(sigma.cocone, p), k=bayes_invert(sigma.cocone, p), p=p
    )


def enumerate_ergodic(sys: DynSystem, sigma: InvariantSigma | None = None) -> list[Kernel]:
    """All ergodic states, one per invariant atom.

    Supported for a single functional generator (uniform on the cycle of
    each component) and for generators that are all bijections (uniform on
    each orbit).
    """
    sigma = sigma or invariant_sigma(sys)
    space = sys.space
    n = space.n_atoms
    states = []
    if sys.bijective:
        for block in sigma.quotient_space.atoms:
            members = set(space.atoms_in(block))
            w = Fraction(1, len(members))
            states.append(state(space, [w if a in members else ZERO for a in range(n)]))
        return states
    if len(sys.generators) == 1 and sys.deterministic:
        t = sys.kernels[0]
        for block in sigma.quotient_space.atoms:
            a = space.atoms_in(block)[0]
            order: dict[int, int] = {}
            while a not in order:
                order[a] = len(order)
                a = sys.image(t, a)
            cycle = {b for b, pos in order.items() if pos >= order[a]}
            w = Fraction(1, len(cycle))
            states.append(state(space, [w if b in cycle else ZERO for b in range(n)]))
        return states
    raise UnsupportedGenerators(
        "ergodic states are enumerated only for one function or for bijections"
    )


def zigzag_relation(sys: DynSystem) -> PointRelation:
    """Equivalence generated by forward and backward steps of the generators.

    Classes are found by walking images and preimages under each generator,
    so this is independent of :func:`invariant_sigma`.
    """
    _require_deterministic(sys)
    space = sys.space
    images = [[sys.image(m, a) for a in range(space.n_atoms)] for m in sys.kernels]
    label = [-1] * space.n_atoms
    classes = []
    for start in range(space.n_atoms):
        if label[start] >= 0:
            continue
        label[start] = len(classes)
        frontier, members = [start], [start]
        while frontier:
            a = frontier.pop()
            steps = [img[a] for img in images]
            steps += [b for img in images for b in range(space.n_atoms) if img[b] == a]
            for b in steps:
                if label[b] < 0:
                    label[b] = label[start]
                    members.append(b)
                    frontier.append(b)
        classes.append(space.points_of(members))
    return PointRelation(space, tuple(classes))


def orbit_space_isomorphism(
    sys: DynSystem, sigma: InvariantSigma | None = None
) -> tuple[FinSpace, Kernel, Kernel]:
    """Orbit space ``X/M`` with the kernels ``X_inv -> X/M`` and back.

    The first kernel is induced by the quotient map ``x -> [x]`` and the
    second is ``h(A | [x]) = 1_A(x)``.  Raises NotMeasurable if the zig-zag
    classes split an invariant atom.
    """
    sigma = sigma or invariant_sigma(sys)
    relation = zigzag_relation(sys)
    carrier = sys.space.carrier
    orbits = discrete(
        ["[" + ",".join(carrier[i] for i in cls) + "]" for cls in relation.classes]
    )
    x_inv = sigma.quotient_space
    to_orbits = kernel_from_function(list(relation.class_of), x_inv, orbits)
    rows = []
    for cls in relation.classes:
        rep = cls[0]
        rows.append(
            tuple(ONE if rep in block else ZERO for block in x_inv.atoms)
        )
    from_orbits = Kernel(orbits, x_inv, tuple(rows))
    return orbits, to_orbits, from_orbits


def _dot_quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(
    sys: DynSystem, sigma: InvariantSigma | None = None, p: Kernel | None = None
) -> str:
    """Graphviz source for the support graph, clustered by invariant atom."""
    sigma = sigma or invariant_sigma(sys)
    space = sys.space
    lines = ["digraph dynamics {", "  node [shape=circle];"]
    for c, block in enumerate(sigma.quotient_space.atoms):
        lines.append(f"  subgraph cluster_{c} {{")
        lines.append(f"    label={_dot_quote(sigma.quotient_space.atom_label(c))};")
        for a in space.atoms_in(block):
            label = space.atom_label(a)
            if p is not None:
                label += f"\\n{p.probs[a]}"
            lines.append(f"    n{a} [label={_dot_quote(label)}];")
        lines.append("  }")
    for name, m in sys.generators:
        for a, row in enumerate(m.rows):
            for b, v in enumerate(row):
                if not v:
                    continue
                text = name if v == 1 else f"{name} {v}"
                lines.append(f"  n{a} -> n{b} [label={_dot_quote(text)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
