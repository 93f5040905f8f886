"""Seeded random spaces, kernels and systems for law checks and tests."""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .dynamics import DynSystem
from .kernel import ONE, ZERO, Kernel, state
from .space import FinSpace


def random_space(
    rng: random.Random, max_atoms: int = 6, max_points: int | None = None, coarse: float = 0.3
) -> FinSpace:
    """A space with at most ``max_atoms`` atoms; coarse with probability ``coarse``."""
    n_atoms = rng.randint(1, max_atoms)
    if max_points is None:
        max_points = n_atoms + 3
    max_points = max(max_points, n_atoms)
    n_points = n_atoms
    if rng.random() < coarse:
        n_points = rng.randint(n_atoms, max_points)
    points = list(range(n_points))
    rng.shuffle(points)
    # Every atom gets one point, the rest are scattered.
    atoms = [[points[j]] for j in range(n_atoms)]
    for i in points[n_atoms:]:
        atoms[rng.randrange(n_atoms)].append(i)
    atoms.sort(key=min)
    return FinSpace(tuple(f"x{i}" for i in range(n_points)), tuple(tuple(a) for a in atoms))


def random_probs(
    rng: random.Random, n: int, sparsity: float = 0.3, point_mass: float = 0.15
) -> tuple[Fraction, ...]:
    if rng.random() < point_mass:
        hit = rng.randrange(n)
        return tuple(ONE if i == hit else ZERO for i in range(n))
    weights = [0 if rng.random() < sparsity else rng.randint(1, 6) for _ in range(n)]
    if not any(weights):
        weights[rng.randrange(n)] = 1
    total = sum(weights)
    return tuple(Fraction(w, total) for w in weights)


def random_kernel(
    rng: random.Random, dom: FinSpace, cod: FinSpace, deterministic: float = 0.2
) -> Kernel:
    if rng.random() < deterministic:
        rows = []
        for _ in range(dom.n_atoms):
            hit = rng.randrange(cod.n_atoms)
            rows.append(tuple(ONE if c == hit else ZERO for c in range(cod.n_atoms)))
        return Kernel(dom, cod, tuple(rows))
    return Kernel(dom, cod, tuple(random_probs(rng, cod.n_atoms) for _ in range(dom.n_atoms)))


def random_state(rng: random.Random, space: FinSpace) -> Kernel:
    return state(space, random_probs(rng, space.n_atoms))


def zero_one_state(rng: random.Random, space: FinSpace) -> Kernel:
    hit = rng.randrange(space.n_atoms)
    return state(space, [ONE if c == hit else ZERO for c in range(space.n_atoms)])


def _unit_rows(targets: Sequence[int], n: int) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(ONE if c == t else ZERO for c in range(n)) for t in targets)


def random_function_system(
    rng: random.Random, max_points: int = 12, max_generators: int = 3, coarse: float = 0.2
) -> DynSystem:
    space = random_space(rng, max_atoms=max_points, max_points=max_points, coarse=coarse)
    n = space.n_atoms
    gens = tuple(
        (f"t{g}", Kernel(space, space, _unit_rows([rng.randrange(n) for _ in range(n)], n)))
        for g in range(rng.randint(1, max_generators))
    )
    return DynSystem(space, gens)


def random_permutation_system(
    rng: random.Random, max_points: int = 12, max_generators: int = 3, coarse: float = 0.2
) -> DynSystem:
    space = random_space(rng, max_atoms=max_points, max_points=max_points, coarse=coarse)
    n = space.n_atoms
    gens = []
    for g in range(rng.randint(1, max_generators)):
        perm = list(range(n))
        rng.shuffle(perm)
        # Mostly short cycles so that orbits stay varied.
        if rng.random() < 0.5:
            perm = list(range(n))
            i, j = rng.randrange(n), rng.randrange(n)
            perm[i], perm[j] = perm[j], perm[i]
        gens.append((f"s{g}", Kernel(space, space, _unit_rows(perm, n))))
    return DynSystem(space, tuple(gens))


def random_stochastic_system(
    rng: random.Random, max_points: int = 12, max_generators: int = 3, coarse: float = 0.2
) -> DynSystem:
    space = random_space(rng, max_atoms=max_points, max_points=max_points, coarse=coarse)
    n = space.n_atoms
    gens = []
    for g in range(rng.randint(1, max_generators)):
        rows = []
        for _ in range(n):
            # Sparse rows keep the support graph from collapsing to one component.
            k = rng.randint(1, min(2, n))
            cols = rng.sample(range(n), k)
            weights = [rng.randint(1, 4) for _ in cols]
            total = sum(weights)
            row = [ZERO] * n
            for c, w in zip(cols, weights):
                row[c] = Fraction(w, total)
            rows.append(tuple(row))
        gens.append((f"m{g}", Kernel(space, space, tuple(rows))))
    return DynSystem(space, tuple(gens))


def random_single_function_system(
    rng: random.Random, max_points: int = 12, coarse: float = 0.2
) -> DynSystem:
    return random_function_system(rng, max_points=max_points, max_generators=1, coarse=coarse)


def random_mixture(rng: random.Random, components: Sequence[Kernel]) -> Kernel:
    """A random convex combination of states on a common space."""
    weights = random_probs(rng, len(components), sparsity=0.4, point_mass=0.2)
    space = components[0].cod
    probs = [ZERO] * space.n_atoms
    for w, comp in zip(weights, components):
        if w:
            for c, v in enumerate(comp.probs):
                probs[c] += w * v
    return state(space, probs)
