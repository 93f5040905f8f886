"""Executable laws: Markov-category axioms and the ergodic decomposition facts.

Each ``law_*`` function checks one instance and returns a bool.  The
brute-force oracles here never call into the code path they are checking:
invariant sets are enumerated subset by subset, ergodicity is tested on
every invariant set.  :func:`check_axioms` runs the whole suite against a
loaded system and is what the ``check-axioms`` CLI command reports.
"""
from __future__ import annotations

import random
from itertools import combinations
from typing import Callable

from .disintegration import (
    bayes_invert,
    find_nontrivial_decomposition,
    inversion_section_check,
    is_trivial_decomposition,
    positivity_instance,
    verify_disintegration,
)
from .dynamics import (
    DynSystem,
    enumerate_ergodic,
    ergodic_decomposition,
    factor_through_quotient,
    invariant_sigma,
    is_as_ergodic,
    is_ergodic,
    is_invariant_set,
    is_left_invariant,
    is_right_invariant,
    orbit_space_isomorphism,
)
from .errors import UnsupportedGenerators
from .kernel import (
    ONE,
    ZERO,
    Kernel,
    as_equal,
    associator,
    compose,
    copy,
    delete,
    identity,
    is_deterministic,
    left_unitor,
    right_unitor,
    swap,
    tensor,
)
from .sampling import (
    random_kernel,
    random_mixture,
    random_space,
    random_state,
)
from .space import FinSpace, product

# ---------- Markov category structure ----------


def inverse(k: Kernel) -> Kernel:
    """Inverse of a permutation kernel (its transpose)."""
    back: dict[int, int] = {}
    for r, row in enumerate(k.entries):
        if len(row) != 1 or row[0][1] != 1:
            raise ValueError("only permutation kernels are inverted here")
        back[row[0][0]] = r
    if sorted(back) != list(range(k.cod.n_atoms)):
        raise ValueError("only permutation kernels are inverted here")
    return Kernel.from_entries(k.cod, k.dom, [((back[c], ONE),) for c in range(k.cod.n_atoms)])


def law_coassociativity(x: FinSpace) -> bool:
    c = copy(x)
    lhs = compose(associator(x, x, x), compose(tensor(c, identity(x)), c))
    rhs = compose(tensor(identity(x), c), c)
    return lhs == rhs


def law_counitality(x: FinSpace) -> bool:
    c = copy(x)
    left = compose(left_unitor(x), compose(tensor(delete(x), identity(x)), c))
    right = compose(right_unitor(x), compose(tensor(identity(x), delete(x)), c))
    return left == identity(x) and right == identity(x)


def law_cocommutativity(x: FinSpace) -> bool:
    return compose(swap(x, x), copy(x)) == copy(x)


def law_terminality(f: Kernel) -> bool:
    return compose(delete(f.cod), f) == delete(f.dom)


def law_tensor_functoriality(f: Kernel, g: Kernel, k: Kernel, h: Kernel) -> bool:
    """``(f (x) g) . (k (x) h) == (f . k) (x) (g . h)`` and identities are kept."""
    interchange = compose(tensor(f, g), tensor(k, h)) == tensor(compose(f, k), compose(g, h))
    units = tensor(identity(k.dom), identity(h.dom)) == identity(product(k.dom, h.dom))
    return interchange and units


def law_copy_tensor(x: FinSpace, y: FinSpace) -> bool:
    """``copy`` on ``x (x) y`` is the two copies followed by a middle swap."""
    step = tensor(copy(x), copy(y))  # -> (X X)(Y Y)
    step = compose(associator(x, x, product(y, y)), step)  # -> X (X (Y Y))
    step = compose(tensor(identity(x), inverse(associator(x, y, y))), step)  # -> X ((X Y) Y)
    step = compose(tensor(identity(x), tensor(swap(x, y), identity(y))), step)  # -> X ((Y X) Y)
    step = compose(tensor(identity(x), associator(y, x, y)), step)  # -> X (Y (X Y))
    step = compose(inverse(associator(x, y, product(x, y))), step)  # -> (X Y)(X Y)
    return step == copy(product(x, y))


def law_determinism_equivalence(f: Kernel) -> bool:
    """The copy equation and the zero-one entry test agree."""
    diagram = compose(copy(f.cod), f) == compose(tensor(f, f), copy(f.dom))
    entries = all(v in (ZERO, ONE) for row in f.rows for v in row)
    return diagram == entries == is_deterministic(f)


def law_deterministic_closure(f: Kernel, g: Kernel) -> bool:
    if not (is_deterministic(f) and is_deterministic(g)):
        return True
    return is_deterministic(compose(g, f)) and is_deterministic(tensor(f, g))


# ---------- disintegration ----------


def law_disintegration(f: Kernel, p: Kernel, rng: random.Random) -> bool:
    """Bayes inverse is valid, a.s. unique, and marginalizes back to ``p``."""
    c = bayes_invert(f, p)
    if not verify_disintegration(f, p, c):
        return False
    q = compose(f, p)
    # Another valid inverse: same rows on the support, arbitrary elsewhere.
    other = Kernel(
        c.dom,
        c.cod,
        tuple(
            row if q.probs[y] else random_kernel(rng, c.cod, c.cod).rows[0]
            for y, row in enumerate(c.rows)
        ),
    )
    if not verify_disintegration(f, p, other) or not as_equal(q, c, other):
        return False
    if compose(c, q) != p:
        return False
    if is_deterministic(f) and not inversion_section_check(f, p):
        return False
    return True


def law_indecomposable_iff_deterministic(p: Kernel) -> bool:
    d = find_nontrivial_decomposition(p)
    if d is None:
        return is_deterministic(p)
    return (
        not is_deterministic(p)
        and compose(d.k, d.q) == p
        and not is_trivial_decomposition(d)
    )


def law_positivity(f: Kernel, p: Kernel) -> bool:
    return positivity_instance(f, p)


# ---------- dynamics ----------


def brute_force_invariant_sets(sys: DynSystem) -> set[frozenset[int]]:
    """Every invariant set, by testing each union of atoms against the definition."""
    space = sys.space
    found = set()
    for size in range(space.n_atoms + 1):
        for chosen in combinations(range(space.n_atoms), size):
            points = space.points_of(chosen)
            if is_invariant_set(points, sys):
                found.add(frozenset(points))
    return found


def unions_of_blocks(blocks) -> set[frozenset[int]]:
    out = set()
    for size in range(len(blocks) + 1):
        for chosen in combinations(blocks, size):
            out.add(frozenset(i for b in chosen for i in b))
    return out


def law_invariant_sigma_oracle(sys: DynSystem) -> bool:
    sigma = invariant_sigma(sys)
    computed = unions_of_blocks(sigma.quotient_space.atoms)
    return computed == brute_force_invariant_sets(sys)


def law_cocone(sys: DynSystem) -> bool:
    sigma = invariant_sigma(sys)
    return is_right_invariant(sigma.cocone, sys) and is_deterministic(sigma.cocone)


def law_universal_property(sys: DynSystem, rng: random.Random) -> bool:
    """Push a random kernel through the cocone and factor it back."""
    sigma = invariant_sigma(sys)
    target = random_space(rng, max_atoms=4)
    g = random_kernel(rng, sigma.quotient_space, target, deterministic=0.4)
    s = compose(g, sigma.cocone)
    if not is_right_invariant(s, sys):
        return False
    s_tilde = factor_through_quotient(s, sys, sigma)
    return (
        compose(s_tilde, sigma.cocone) == s
        and s_tilde == g
        and is_deterministic(s_tilde) == is_deterministic(s)
    )


def law_generator_sufficiency(sys: DynSystem, p: Kernel, rng: random.Random, words: int = 5) -> bool:
    """A state fixed by every generator is fixed by random composites."""
    if not is_left_invariant(p, sys) or not sys.generators:
        return True
    for _ in range(words):
        word = identity(sys.space)
        for _ in range(rng.randint(1, 4)):
            word = compose(rng.choice(sys.kernels), word)
        if compose(word, p) != p:
            return False
    return True


def brute_force_ergodic(p: Kernel, invariant_sets) -> bool:
    return all(p.mass(a) in (ZERO, ONE) for a in invariant_sets)


def law_ergodicity_corollary(sys: DynSystem, p: Kernel, invariant_sets=None) -> bool:
    """Quotient-based ergodicity equals the zero-one test on all invariant sets."""
    if not is_left_invariant(p, sys):
        return True
    if invariant_sets is None:
        invariant_sets = brute_force_invariant_sets(sys)
    return is_ergodic(p, sys) == brute_force_ergodic(p, invariant_sets)


def law_decomposition(sys: DynSystem, p: Kernel, ergodic: list[Kernel] | None = None) -> bool:
    """``k . q == p``, ``k`` is a.s. ergodic, ``r . k`` is a.s. the identity.

    With ``ergodic`` given for a single-function system, every charged row of
    ``k`` must be the enumerated ergodic state of its invariant atom.
    """
    sigma = invariant_sigma(sys)
    d = ergodic_decomposition(p, sys, sigma)
    if compose(d.k, d.q) != p or not is_as_ergodic(d.k, d.q, sys, sigma):
        return False
    if not as_equal(d.q, compose(sigma.cocone, d.k), identity(sigma.quotient_space)):
        return False
    if ergodic is not None:
        for y in d.q.support():
            if d.k.rows[y] != ergodic[y].probs:
                return False
    return True


def law_mixture_of_ergodic(p: Kernel, ergodic: list[Kernel], sys: DynSystem) -> bool:
    """An invariant ``p`` equals the mixture of ergodic states weighted by block mass."""
    sigma = invariant_sigma(sys)
    weights = [p.mass(block) for block in sigma.quotient_space.atoms]
    mixed = [
        sum((w * e.probs[c] for w, e in zip(weights, ergodic)), ZERO)
        for c in range(sys.space.n_atoms)
    ]
    return tuple(mixed) == p.probs


def law_orbit_isomorphism(sys: DynSystem) -> bool:
    sigma = invariant_sigma(sys)
    orbits, to_orbits, back = orbit_space_isomorphism(sys, sigma)
    return (
        compose(back, to_orbits) == identity(sigma.quotient_space)
        and compose(to_orbits, back) == identity(orbits)
        and is_deterministic(to_orbits)
        and is_deterministic(back)
    )


# ---------- suite runner ----------


def _record(verdicts: dict, diagnostics: list, name: str, check: Callable[[], bool], witness: str):
    try:
        ok = bool(check())
    except AssertionError as exc:
        ok, witness = False, f"{witness}: internal cross-check failed ({exc})"
    verdicts[name] = verdicts.get(name, True) and ok
    if not ok:
        diagnostics.append(f"{name}: fails on {witness}")


def check_axioms(
    sys: DynSystem, p: Kernel | None = None, seed: int = 0, instances: int = 20
) -> tuple[dict[str, bool], list[str]]:
    """Run every law on the loaded objects plus seeded random instances."""
    rng = random.Random(seed)
    verdicts: dict[str, bool] = {}
    diagnostics: list[str] = []
    x = sys.space

    for i in range(instances):
        y = random_space(rng, max_atoms=4, coarse=0.0)
        disc = x if x.is_discrete and x.n_atoms <= 6 else random_space(rng, coarse=0.0)
        tag = f"random instance {i} (seed {seed})"
        _record(verdicts, diagnostics, "coassociativity", lambda: law_coassociativity(disc), tag)
        _record(verdicts, diagnostics, "counitality", lambda: law_counitality(disc), tag)
        _record(verdicts, diagnostics, "cocommutativity", lambda: law_cocommutativity(disc), tag)
        _record(verdicts, diagnostics, "copy_tensor_compatibility", lambda: law_copy_tensor(disc, y), tag)
        f = random_kernel(rng, x, y)
        g = random_kernel(rng, y, x)
        _record(verdicts, diagnostics, "terminality", lambda: law_terminality(f), tag)
        _record(
            verdicts, diagnostics, "tensor_functoriality",
            lambda: law_tensor_functoriality(g, f, f, g), tag,
        )
        _record(verdicts, diagnostics, "deterministic_closure", lambda: law_deterministic_closure(f, g), tag)
        pf = random_state(rng, x)
        _record(verdicts, diagnostics, "disintegration", lambda: law_disintegration(f, pf, rng), tag)
        _record(verdicts, diagnostics, "positivity", lambda: law_positivity(f, pf), tag)
        _record(
            verdicts, diagnostics, "indecomposable_iff_deterministic",
            lambda: law_indecomposable_iff_deterministic(pf), tag,
        )

    for name, m in sys.generators:
        tag = f"generator {name!r}"
        _record(verdicts, diagnostics, "terminality", lambda: law_terminality(m), tag)
        if x.is_discrete:
            _record(verdicts, diagnostics, "determinism_equivalence", lambda: law_determinism_equivalence(m), tag)

    if x.n_atoms <= 12:
        invariant_sets = brute_force_invariant_sets(sys)
        _record(verdicts, diagnostics, "invariant_sigma_oracle", lambda: law_invariant_sigma_oracle(sys), "the loaded system")
    else:
        invariant_sets = None
    _record(verdicts, diagnostics, "cocone_invariant_deterministic", lambda: law_cocone(sys), "the loaded system")

    if sys.deterministic:
        for i in range(instances):
            _record(
                verdicts, diagnostics, "universal_property",
                lambda: law_universal_property(sys, rng), f"random observable {i} (seed {seed})",
            )
        _record(verdicts, diagnostics, "orbit_space_isomorphism", lambda: law_orbit_isomorphism(sys), "the loaded system")

    try:
        ergodic = enumerate_ergodic(sys)
    except UnsupportedGenerators:
        ergodic = None
    if ergodic is not None:
        _record(
            verdicts, diagnostics, "enumerated_states_ergodic",
            lambda: all(is_ergodic(e, sys) for e in ergodic), "the enumerated ergodic states",
        )

    measures = []
    if p is not None:
        measures.append(("the supplied measure", p))
    if ergodic is not None:
        measures += [(f"random mixture {i} (seed {seed})", random_mixture(rng, ergodic)) for i in range(instances)]
    for tag, mu in measures:
        invariant = is_left_invariant(mu, sys)
        if tag == "the supplied measure" and not invariant:
            diagnostics.append("note: supplied measure is not invariant; decomposition laws skipped")
            continue
        _record(verdicts, diagnostics, "generator_sufficiency", lambda: law_generator_sufficiency(sys, mu, rng), tag)
        if invariant_sets is not None:
            _record(
                verdicts, diagnostics, "ergodicity_corollary",
                lambda: law_ergodicity_corollary(sys, mu, invariant_sets), tag,
            )
        if sys.deterministic:
            _record(
                verdicts, diagnostics, "ergodic_decomposition",
                lambda: law_decomposition(sys, mu, ergodic), tag,
            )
        if ergodic is not None:
            _record(verdicts, diagnostics, "mixture_of_ergodic", lambda: law_mixture_of_ergodic(mu, ergodic, sys), tag)

    return verdicts, diagnostics
