"""Bayesian inversion and decompositions of states into mixtures."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import NotDeterministic, SpaceMismatch
from .kernel import (
    ZERO,
    Kernel,
    as_equal,
    compose,
    delete,
    identity,
    is_deterministic,
    state,
)
from .space import discrete

__all__ = [
    "Decomposition",
    "bayes_invert",
    "verify_disintegration",
    "is_trivial_decomposition",
    "find_nontrivial_decomposition",
    "positivity_instance",
    "inversion_section_check",
]


@dataclass(frozen=True)
class Decomposition:
    """A factorization ``p = k . q`` of the state ``p`` through ``q``."""

    q: Kernel
    k: Kernel
    p: Kernel

    def __post_init__(self):
        if not (self.q.is_state and self.p.is_state):
            raise ValueError("q and p must be states")
        if compose(self.k, self.q) != self.p:
            raise ValueError("k . q does not reproduce p")


def bayes_invert(f: Kernel, p: Kernel) -> Kernel:
    """Inverse of ``f: X -> Y`` relative to the state ``p`` on ``X``.

    ``f+(x|y) = p(x) f(y|x) / q(y)`` with ``q = f . p``.  Rows where
    ``q(y) = 0`` are filled with ``p`` itself so the result is total.
    """
    if p.cod != f.dom:
        raise SpaceMismatch("the state must live on the domain of f")
    prior = p.probs
    pushed = compose(f, p).probs
    rows = []
    for y, qy in enumerate(pushed):
        if not qy:
            rows.append(prior)
            continue
        rows.append(
            tuple(px * f.rows[x][y] / qy if px else ZERO for x, px in enumerate(prior))
        )
    return Kernel(f.cod, f.dom, tuple(rows))


def verify_disintegration(f: Kernel, p: Kernel, c: Kernel) -> bool:
    """Check ``p(x) f(y|x) == q(y) c(x|y)`` for every pair of atoms."""
    if p.cod != f.dom or c.dom != f.cod or c.cod != f.dom:
        raise SpaceMismatch("need f: X -> Y, p on X and c: Y -> X")
    prior = p.probs
    pushed = compose(f, p).probs
    return all(
        prior[x] * f.rows[x][y] == pushed[y] * c.rows[y][x]
        for x in range(f.dom.n_atoms)
        for y in range(f.cod.n_atoms)
    )


def is_trivial_decomposition(d: Decomposition) -> bool:
    """Whether ``k`` is ``q``-almost surely the constant kernel at ``p``."""
    constant = compose(d.p, delete(d.k.dom))
    return as_equal(d.q, d.k, constant)


def find_nontrivial_decomposition(p: Kernel) -> Decomposition | None:
    """A nontrivial two-component decomposition, or None if ``p`` is zero-one.

    The lowest-indexed charged atom is split off from the rest of the support
    and ``p`` is written as the mixture of its two conditionals.
    """
    if is_deterministic(p):
        return None
    probs = p.probs
    support = [c for c, v in enumerate(probs) if v]
    head = support[0]
    head_mass = probs[head]
    tail_mass = 1 - head_mass
    on_head = tuple(v / head_mass if c == head else ZERO for c, v in enumerate(probs))
    on_tail = tuple(ZERO if c == head else v / tail_mass for c, v in enumerate(probs))
    y = discrete(["S", "S'"])
    return Decomposition(
        q=state(y, [head_mass, tail_mass]),
        k=Kernel(y, p.cod, (on_head, on_tail)),
        p=p,
    )


def positivity_instance(f: Kernel, p: Kernel) -> bool:
    """If ``f . p`` is deterministic, check that ``f`` is ``p``-a.s. constant at it."""
    pushed = compose(f, p)
    if not is_deterministic(pushed):
        return True
    return as_equal(p, f, compose(pushed, delete(f.dom)))


def inversion_section_check(f: Kernel, p: Kernel) -> bool:
    """For deterministic ``f``, ``f . f+`` is ``(f . p)``-a.s. the identity."""
    if not is_deterministic(f):
        raise NotDeterministic("inversion_section_check needs a zero-one kernel")
    return as_equal(compose(f, p), compose(f, bayes_invert(f, p)), identity(f.cod))
