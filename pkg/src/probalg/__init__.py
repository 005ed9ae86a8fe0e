"""Exact computations in finite probability algebras.

Events, subalgebras, conditional probability, independence, types and their
distances, atom invariants, random-variable metrics and entropy, all with
exact rational arithmetic (entropy is binary64). The ``logic`` subpackage
parses and evaluates continuous-logic formulas over the same structures.
"""
from .algebra import (
    AxiomReport,
    Embedding,
    Event,
    FiniteProbabilityAlgebra,
    Subalgebra,
    associated_partition,
    cell,
    complement,
    dist,
    generated_subalgebra,
    is_partition,
    join,
    meet,
    mu,
    split_atoms,
    symdiff,
    tuple_from_partition,
    uniform_algebra,
    verify_axioms,
)
from .atoms import (
    PhiInvariant,
    at_n,
    atoms_report,
    chi,
    elementarily_equivalent,
    find_isomorphism,
    phi_invariant,
    phi_n_bruteforce,
    phi_n_closed,
    psi,
    theta,
)
from .conditional import StepFunction, cond_expect, cond_prob, indicator, l1_distance, level_partition
from .entropy import chain_rule_check, cond_entropy, entropy_drop, entropy_forking_gap
from .errors import *  # noqa: F401,F403
from .forking import epsilon_forks, forking_chain_check, forking_distance, nonforking_extension
from .independence import (
    characterization_report,
    extend_with_independent_copy,
    independence_defect,
    independent,
)
from .io import Structure, load_structure, structure_from_dict
from .randvars import RVPartition, dP_rv, dyadic_approx, project_pi, rho_n
from .typespace import (
    TypeDescriptor,
    dCb,
    dP,
    lipschitz_check,
    optimal_realization,
    realize_type,
    realizes,
    sfb_check,
    type_distance_partitions,
    type_of,
)

__version__ = "0.1.0"
