"""Exact computations with finite involutive bisemilattices.

An involutive bisemilattice is represented either as a direct system of
finite Boolean algebras over a join-semilattice (:mod:`ibsl.plonka`) or as
bare operation tables; :func:`decompose` and :func:`plonka_sum` convert
between the two.
"""

from .booleanisation import Booleanisation, booleanise, induce_hom, is_trivial_booleanisation
from .counting import chain_factor, enumerate_inclusive, forest_oracle, forests, n_d
from .errors import IBSLError, Violation
from .finbool import BooleanAlgebra, BooleanHom, Measure, bool_eval, measure_check
from .metrics_topology import (
    is_metric,
    kolmogorov_quotient,
    make_section,
    pseudometric,
    state_uniqueness_check,
    topology_report,
    verify_section,
)
from .plonka import (
    Decomposition,
    DirectSystem,
    PlonkaElement,
    RawAlgebra,
    check_ibsl,
    check_partition_function,
    decompose,
    is_injective_ibsl,
    is_ngib,
    partition_apply,
    plonka_eval,
    plonka_sum,
    systems_isomorphic,
    validate_system,
)
from .semilattice import JoinSemilattice, from_order, validate_semilattice
from .states import (
    State,
    carries_state,
    check_alt_state,
    check_state_componentwise,
    check_state_direct,
    faithful_diagnosis,
    integral_representation_check,
    is_faithful,
    phi,
    phi_inverse,
    state_space_vertices,
)

__all__ = [name for name in dir() if not name.startswith("_")]
