"""Exact finite stochastic kernels and ergodic decomposition of finite dynamics."""
from .disintegration import (
    Decomposition,
    bayes_invert,
    find_nontrivial_decomposition,
    inversion_section_check,
    is_trivial_decomposition,
    positivity_instance,
    verify_disintegration,
)
from .dynamics import (
    DynSystem,
    InvariantSigma,
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
    zigzag_relation,
)
from .errors import FinStochError
from .kernel import (
    Kernel,
    as_equal,
    compose,
    copy,
    delete,
    identity,
    is_deterministic,
    is_independent,
    kernel_from_function,
    marginal,
    point_mass,
    state,
    structural,
    swap,
    tensor,
)
from .space import (
    FinSpace,
    PointRelation,
    discrete,
    indistinguishability_quotient,
    product,
    unit_space,
)

__version__ = "0.1.0"
