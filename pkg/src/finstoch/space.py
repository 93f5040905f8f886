"""Finite measurable spaces.

A finite sigma-algebra is the same thing as a partition of the carrier, so a
:class:`FinSpace` stores its carrier labels and the partition into atoms.
Measurable sets are unions of atoms and are handled as index sets.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import TYPE_CHECKING, Iterable, Sequence

from .errors import NotMeasurable, ParseError

if TYPE_CHECKING:
    from .kernel import Kernel

__all__ = [
    "FinSpace",
    "PointRelation",
    "unit_space",
    "discrete",
    "product",
    "indistinguishability_relation",
    "indistinguishability_quotient",
]


@dataclass(frozen=True)
class FinSpace:
    """Ordered carrier of point labels plus a partition into atoms.

    ``atoms`` is a tuple of sorted index tuples.  Their order fixes the
    row/column order of every kernel touching the space.  ``factors`` is
    set by :func:`product` and does not take part in equality.
    """

    carrier: tuple[str, ...]
    atoms: tuple[tuple[int, ...], ...]
    factors: tuple[FinSpace, FinSpace] | None = field(
        default=None, compare=False, repr=False
    )

    def __post_init__(self):
        carrier = tuple(self.carrier)
        atoms = tuple(tuple(sorted(a)) for a in self.atoms)
        object.__setattr__(self, "carrier", carrier)
        object.__setattr__(self, "atoms", atoms)

        seen_labels = set()
        for i, label in enumerate(carrier):
            if not isinstance(label, str):
                raise ParseError(f"carrier[{i}]: label must be a string, got {label!r}")
            if label in seen_labels:
                raise ParseError(f"carrier[{i}]: duplicate label {label!r}")
            seen_labels.add(label)

        owner: dict[int, int] = {}
        for j, atom in enumerate(atoms):
            if not atom:
                raise ParseError(f"atoms[{j}] is empty")
            for i in atom:
                if not isinstance(i, int) or isinstance(i, bool):
                    raise ParseError(f"atoms[{j}]: index {i!r} is not an integer")
                if not 0 <= i < len(carrier):
                    raise ParseError(f"atoms[{j}]: index {i} is outside the carrier")
                if i in owner:
                    raise ParseError(
                        f"atoms[{j}]: index {i} already belongs to atoms[{owner[i]}]"
                    )
                owner[i] = j
        for i in range(len(carrier)):
            if i not in owner:
                raise ParseError(f"carrier index {i} ({carrier[i]!r}) is in no atom")

    def __len__(self) -> int:
        return len(self.carrier)

    @property
    def n_atoms(self) -> int:
        return len(self.atoms)

    @cached_property
    def atom_of(self) -> tuple[int, ...]:
        """Atom index of every carrier point."""
        owner = [0] * len(self.carrier)
        for j, atom in enumerate(self.atoms):
            for i in atom:
                owner[i] = j
        return tuple(owner)

    @cached_property
    def index(self) -> dict[str, int]:
        return {label: i for i, label in enumerate(self.carrier)}

    @cached_property
    def is_discrete(self) -> bool:
        return all(len(a) == 1 for a in self.atoms)

    def atom_label(self, j: int) -> str:
        labels = [self.carrier[i] for i in self.atoms[j]]
        if len(labels) == 1:
            return labels[0]
        return "{" + ",".join(labels) + "}"

    def atoms_in(self, points: Iterable[int]) -> tuple[int, ...]:
        """Atom indices making up ``points``; raise if not a union of atoms."""
        pts = set(points)
        for i in pts:
            if not 0 <= i < len(self.carrier):
                raise NotMeasurable(f"index {i} is outside the carrier")
        touched = sorted({self.atom_of[i] for i in pts})
        for j in touched:
            if not pts.issuperset(self.atoms[j]):
                raise NotMeasurable(
                    f"set {sorted(pts)} cuts atom {j} {list(self.atoms[j])}"
                )
        return tuple(touched)

    def points_of(self, atom_indices: Iterable[int]) -> tuple[int, ...]:
        return tuple(sorted(i for j in atom_indices for i in self.atoms[j]))

    def is_measurable(self, points: Iterable[int]) -> bool:
        try:
            self.atoms_in(points)
        except NotMeasurable:
            return False
        return True


@dataclass(frozen=True)
class PointRelation:
    """An equivalence relation on the carrier of ``space``, given by classes."""

    space: FinSpace
    classes: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        classes = tuple(tuple(sorted(c)) for c in self.classes)
        object.__setattr__(self, "classes", classes)
        flat = sorted(i for c in classes for i in c)
        if flat != list(range(len(self.space))) or any(not c for c in classes):
            raise ValueError("classes must partition the carrier")

    @cached_property
    def class_of(self) -> tuple[int, ...]:
        owner = [0] * len(self.space)
        for j, c in enumerate(self.classes):
            for i in c:
                owner[i] = j
        return tuple(owner)

    def related(self, i: int, j: int) -> bool:
        return self.class_of[i] == self.class_of[j]


@lru_cache(maxsize=None)
def unit_space() -> FinSpace:
    """The one-point space I."""
    return FinSpace(("*",), ((0,),))


def discrete(labels: Sequence[str]) -> FinSpace:
    return FinSpace(tuple(labels), tuple((i,) for i in range(len(labels))))


@lru_cache(maxsize=4096)
def product(x: FinSpace, y: FinSpace) -> FinSpace:
    """Product space, carrier and atoms in row-major order over ``x``."""
    ny = len(y)
    carrier = tuple(f"({a},{b})" for a in x.carrier for b in y.carrier)
    atoms = tuple(
        tuple(i * ny + k for i in ax for k in ay) for ax in x.atoms for ay in y.atoms
    )
    return FinSpace(carrier, atoms, factors=(x, y))


def indistinguishability_relation(x: FinSpace) -> PointRelation:
    """Points are related iff no measurable set separates them, i.e. same atom."""
    return PointRelation(x, x.atoms)


def indistinguishability_quotient(x: FinSpace) -> tuple[FinSpace, Kernel, Kernel]:
    """Quotient by indistinguishability, with the quotient kernel and its inverse.

    The quotient has one point per atom and is discrete.  Returns
    ``(quotient, q, h)`` with ``q: x -> quotient`` induced by the quotient map
    and ``h: quotient -> x`` given by ``h(A | [x]) = 1_A(x)``.
    """
    from .kernel import Kernel, ONE, ZERO

    quotient = discrete([x.atom_label(j) for j in range(x.n_atoms)])
    n = x.n_atoms
    # q sends every point of atom j to point j of the quotient.
    q_rows = tuple(
        tuple(ONE if quotient.atom_of[j] == c else ZERO for c in range(n))
        for j in range(n)
    )
    # h evaluates the indicator of each atom of x at a representative of [x].
    h_rows = tuple(
        tuple(ONE if x.atom_of[x.atoms[j][0]] == c else ZERO for c in range(n))
        for j in range(n)
    )
    return quotient, Kernel(x, quotient, q_rows), Kernel(quotient, x, h_rows)
