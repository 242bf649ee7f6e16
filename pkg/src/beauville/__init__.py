"""Finite groups as Cayley tables, Sigma sets of generating pairs, and the
Beauville dimension."""

__version__ = "0.1.0"

from .constructions import (
    QuotientMap,
    closure_from_permutations,
    cyclic_group,
    direct_product,
    quotient,
    semidirect_product,
)
from .core import (
    Classification,
    DimensionResult,
    GeneratingPair,
    SigmaRecord,
    StructureFamily,
    beauville_dimension,
    check_structure,
    enumerate_sigma_records,
    is_faithfully_represented,
    is_generating_pair,
    lift_structure,
    sigma,
    verify_certificate,
)
from .dsl import build, parse_spec, parse_word, render_spec
from .elements import ElementSet
from .errors import *  # noqa: F401,F403
from .fp import Presentation, finitely_presented, todd_coxeter
from .groups import (
    GroupTable,
    center,
    conjugacy_classes,
    cyclic_subgroup,
    element_order,
    normal_closure,
    subgroup_generated,
)
