"""Exact stochastic kernels between finite spaces.

Kernels are matrices of :class:`fractions.Fraction` with one row per atom of
the domain and one column per atom of the codomain.  Rows indexed by atoms
rather than points is what makes every kernel measurable.

``h @ k`` is sequential composition (first ``k``, then ``h``).
"""
from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence, Union

from .errors import CopyNeedsPoints, NotAProduct, NotMeasurable, ParseError, SpaceMismatch
from .space import FinSpace, product, unit_space

__all__ = [
    "ZERO",
    "ONE",
    "Kernel",
    "state",
    "point_mass",
    "compose",
    "tensor",
    "identity",
    "copy",
    "delete",
    "swap",
    "structural",
    "associator",
    "left_unitor",
    "right_unitor",
    "kernel_from_function",
    "marginal",
    "is_deterministic",
    "is_independent",
    "as_equal",
]

ZERO = Fraction(0)
ONE = Fraction(1)

Entry = Union[Fraction, int]


def _as_fraction(value, where: str) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"{where}: expected an exact rational, got {value!r}")
    return Fraction(value)


class Kernel:
    """A stochastic matrix ``dom -> cod``; a state when ``dom`` is the unit.

    Built from dense ``rows`` (one per domain atom, one entry per codomain
    atom).  Internally only the nonzero entries are kept, as ``entries``:
    per row, a tuple of ``(column, value)`` pairs in column order.
    """

    __slots__ = ("dom", "cod", "entries", "__dict__")

    def __init__(self, dom: FinSpace, cod: FinSpace, rows: Sequence[Sequence[Entry]]):
        n_rows, n_cols = dom.n_atoms, cod.n_atoms
        if len(rows) != n_rows:
            raise ParseError(f"expected {n_rows} rows (domain atoms), got {len(rows)}")
        entries = []
        for r, row in enumerate(rows):
            if len(row) != n_cols:
                raise ParseError(
                    f"row {r}: expected {n_cols} entries (codomain atoms), got {len(row)}"
                )
            entries.append(
                tuple(
                    (c, _as_fraction(v, f"row {r}, column {c}"))
                    for c, v in enumerate(row)
                    if v is not ZERO and v != 0
                )
            )
        self._setup(dom, cod, tuple(entries))

    @classmethod
    def from_entries(cls, dom: FinSpace, cod: FinSpace, entries) -> Kernel:
        """Build from sparse rows of ``(column, value)`` pairs."""
        k = cls.__new__(cls)
        k._setup(dom, cod, tuple(tuple(row) for row in entries))
        return k

    def _setup(self, dom, cod, entries):
        if len(entries) != dom.n_atoms:
            raise ParseError(f"expected {dom.n_atoms} rows (domain atoms), got {len(entries)}")
        n_cols = cod.n_atoms
        for r, row in enumerate(entries):
            if len(row) == 1 and row[0][1] == 1 and 0 <= row[0][0] < n_cols:
                continue
            last = -1
            total = ZERO
            for c, v in row:
                if not last < c < n_cols:
                    raise ParseError(f"row {r}: column {c} out of order or out of range")
                last = c
                if v <= 0:
                    raise ParseError(f"row {r}, column {c}: entry {v} is not positive")
                total += v
            if total != 1:
                raise ParseError(f"row {r}: entries sum to {total}, not 1")
        object.__setattr__(self, "dom", dom)
        object.__setattr__(self, "cod", cod)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError("Kernel is immutable")

    def __eq__(self, other):
        if not isinstance(other, Kernel):
            return NotImplemented
        return (
            self.entries == other.entries and self.dom == other.dom and self.cod == other.cod
        )

    def __hash__(self):
        return hash((self.dom, self.cod, self.entries))

    def __repr__(self):
        return f"Kernel(dom={self.dom.carrier}, cod={self.cod.carrier}, rows={self.rows})"

    def __matmul__(self, other: Kernel) -> Kernel:
        return compose(self, other)

    @cached_property
    def rows(self) -> tuple[tuple[Fraction, ...], ...]:
        """Dense matrix view."""
        n = self.cod.n_atoms
        dense = []
        for row in self.entries:
            full = [ZERO] * n
            for c, v in row:
                full[c] = v
            dense.append(tuple(full))
        return tuple(dense)

    @property
    def shape(self) -> tuple[int, int]:
        return self.dom.n_atoms, self.cod.n_atoms

    @property
    def is_state(self) -> bool:
        return self.dom == unit_space()

    @property
    def probs(self) -> tuple[Fraction, ...]:
        """The single row of a state."""
        if len(self.entries) != 1:
            raise ValueError("probs is only defined for kernels with one row")
        return self.rows[0]

    def support(self) -> tuple[int, ...]:
        """Codomain atoms receiving positive mass from some row."""
        return tuple(sorted({c for row in self.entries for c, _ in row}))

    def mass(self, points: Iterable[int], row: int = 0) -> Fraction:
        """``k(A | row)`` for a measurable set ``A`` of codomain points."""
        chosen = set(self.cod.atoms_in(points))
        return sum((v for c, v in self.entries[row] if c in chosen), ZERO)


def state(space: FinSpace, probs: Sequence[Entry]) -> Kernel:
    return Kernel(unit_space(), space, (tuple(probs),))


def point_mass(space: FinSpace, label: str) -> Kernel:
    atom = space.atom_of[space.index[label]]
    return state(space, [ONE if c == atom else ZERO for c in range(space.n_atoms)])


def compose(h: Kernel, k: Kernel) -> Kernel:
    """``h after k`` by the Chapman-Kolmogorov sum."""
    if k.cod != h.dom:
        raise SpaceMismatch(
            f"cannot compose: codomain {k.cod.carrier} of the first kernel differs "
            f"from domain {h.dom.carrier} of the second"
        )
    hrows = h.entries
    out = []
    for krow in k.entries:
        if len(krow) == 1 and krow[0][1] == 1:
            out.append(hrows[krow[0][0]])
            continue
        acc: dict[int, Fraction] = {}
        for y, w in krow:
            for z, v in hrows[y]:
                acc[z] = acc[z] + w * v if z in acc else w * v
        out.append(tuple(sorted(acc.items())))
    return Kernel.from_entries(k.dom, h.cod, out)


def tensor(k: Kernel, h: Kernel) -> Kernel:
    """Independent product: entry ``((x,z),(y,w)) = k(y|x) h(w|z)``."""
    width = h.cod.n_atoms
    out = []
    for krow in k.entries:
        for hrow in h.entries:
            out.append(
                tuple(
                    (a * width + b, u * v if u != 1 else v)
                    for a, u in krow
                    for b, v in hrow
                )
            )
    return Kernel.from_entries(product(k.dom, h.dom), product(k.cod, h.cod), out)


def identity(x: FinSpace) -> Kernel:
    return Kernel.from_entries(x, x, [((i, ONE),) for i in range(x.n_atoms)])


def copy(x: FinSpace) -> Kernel:
    """Diagonal ``x -> x (x) x``; only offered on spaces with singleton atoms."""
    if not x.is_discrete:
        bad = next(j for j, a in enumerate(x.atoms) if len(a) > 1)
        raise CopyNeedsPoints(f"copy needs singleton atoms; atom {bad} is {list(x.atoms[bad])}")
    n = x.n_atoms
    return Kernel.from_entries(x, product(x, x), [((a * n + a, ONE),) for a in range(n)])


def delete(x: FinSpace) -> Kernel:
    return Kernel.from_entries(x, unit_space(), [((0, ONE),)] * x.n_atoms)


def swap(x: FinSpace, y: FinSpace) -> Kernel:
    nx, ny = len(x), len(y)
    return kernel_from_function(
        [k * nx + i for i in range(nx) for k in range(ny)], product(x, y), product(y, x)
    )


def structural(kind: str, x: FinSpace, y: FinSpace | None = None) -> Kernel:
    """One of the structure maps: ``identity``, ``copy``, ``delete`` or ``swap``."""
    if kind == "identity":
        return identity(x)
    if kind == "copy":
        return copy(x)
    if kind == "delete":
        return delete(x)
    if kind == "swap":
        if y is None:
            raise ValueError("swap requires a second space")
        return swap(x, y)
    raise ValueError(f"unknown structural kernel {kind!r}")


def associator(x: FinSpace, y: FinSpace, z: FinSpace) -> Kernel:
    """Canonical ``(x (x) y) (x) z -> x (x) (y (x) z)``."""
    # Row-major ordering makes this the identity on indices.
    left = product(product(x, y), z)
    return kernel_from_function(range(len(left)), left, product(x, product(y, z)))


def left_unitor(x: FinSpace) -> Kernel:
    """Canonical ``I (x) x -> x``."""
    return kernel_from_function(range(len(x)), product(unit_space(), x), x)


def right_unitor(x: FinSpace) -> Kernel:
    """Canonical ``x (x) I -> x``."""
    return kernel_from_function(range(len(x)), product(x, unit_space()), x)


def kernel_from_function(
    mapping: Mapping[str, str] | Sequence[int] | Iterable[int],
    dom: FinSpace,
    cod: FinSpace,
) -> Kernel:
    """Zero-one kernel induced by a point map ``dom -> cod``.

    ``mapping`` is either a label-to-label mapping or a sequence giving the
    image index of each domain point.  Raises :class:`NotMeasurable` when
    the preimage of some codomain atom is not a union of domain atoms.
    """
    if isinstance(mapping, Mapping):
        image = []
        for label in dom.carrier:
            if label not in mapping:
                raise ParseError(f"map: no image given for point {label!r}")
            target = mapping[label]
            if target not in cod.index:
                raise ParseError(f"map: image {target!r} of {label!r} is not a codomain point")
            image.append(cod.index[target])
    else:
        image = list(mapping)
        if len(image) != len(dom):
            raise ParseError(f"map: expected {len(dom)} images, got {len(image)}")
        for i, t in enumerate(image):
            if not 0 <= t < len(cod):
                raise ParseError(f"map: image {t} of point {i} is outside the codomain")

    rows = []
    for atom in dom.atoms:
        targets = {cod.atom_of[image[i]] for i in atom}
        if len(targets) > 1:
            bad = min(targets)
            raise NotMeasurable(
                f"preimage of codomain atom {bad} {list(cod.atoms[bad])} "
                f"splits domain atom {list(atom)}"
            )
        (t,) = targets
        rows.append(((t, ONE),))
    return Kernel.from_entries(dom, cod, rows)


def marginal(p: Kernel, side: str) -> Kernel:
    """Discard one factor of a kernel into a product space.

    ``side`` names the factor that is kept: ``"left"`` or ``"right"``.
    """
    if p.cod.factors is None:
        raise NotAProduct("codomain carries no product structure")
    x, y = p.cod.factors
    ny = y.n_atoms
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    rows = []
    for row in p.entries:
        acc: dict[int, Fraction] = {}
        for c, v in row:
            kept = c // ny if side == "left" else c % ny
            acc[kept] = acc[kept] + v if kept in acc else v
        rows.append(tuple(sorted(acc.items())))
    return Kernel.from_entries(p.dom, x if side == "left" else y, rows)


def is_deterministic(f: Kernel) -> bool:
    """True iff every entry is 0 or 1.

    Where copy exists on both ends the defining equation
    ``copy . f == (f (x) f) . copy`` is evaluated too and must agree.
    """
    entrywise = all(v == 1 for row in f.entries for _, v in row)
    if f.dom.is_discrete and f.cod.is_discrete:
        diagram = compose(copy(f.cod), f) == compose(tensor(f, f), copy(f.dom))
        assert diagram == entrywise, "determinism tests disagree"
    return entrywise


def is_independent(p: Kernel) -> bool:
    """True iff the joint state equals the product of its marginals.

    Any one-point domain is accepted, so tensors of states (domain I (x) I)
    can be passed directly.
    """
    if p.dom.n_atoms != 1:
        raise ValueError("is_independent expects a state")
    p = state(p.cod, p.probs)
    unit = unit_space()
    split_unit = kernel_from_function([0], unit, product(unit, unit))
    joint = compose(tensor(marginal(p, "left"), marginal(p, "right")), split_unit)
    return joint == p


def as_equal(p: Kernel, f: Kernel, g: Kernel) -> bool:
    """Whether ``f`` and ``g`` are ``p``-almost surely equal.

    Reduced form: ``f`` and ``g`` agree on every atom charged by some row of
    ``p``.  When the middle space has singleton atoms the copy-based
    equation ``(id (x) f) . copy . p == (id (x) g) . copy . p`` is checked
    as well; on coarse spaces copy is unavailable and only the reduced form
    is used.
    """
    if p.cod != f.dom or f.dom != g.dom or f.cod != g.cod:
        raise SpaceMismatch("as_equal needs p: A -> X and f, g: X -> Y")
    reduced = all(f.entries[x] == g.entries[x] for x in p.support())
    x = p.cod
    if x.is_discrete:
        copied = compose(copy(x), p)
        lhs = compose(tensor(identity(x), f), copied)
        rhs = compose(tensor(identity(x), g), copied)
        assert (lhs == rhs) == reduced, "almost-sure equality tests disagree"
    return reduced
