"""Exact dimensions of additive sets: dissociativity, 1-spans and their
four associated dimensions, with constructions and verification tools."""

from .core import (
    AddimError,
    AdditiveSet,
    ContractViolation,
    NonDissociationWitness,
    ParseError,
    ResourceError,
    SignVector,
    SpanningCertificate,
    evaluate,
    negate_closure,
    parse_set,
    serialize_set,
)
from .dissociation import (
    SubsetSumTable,
    extend,
    is_dissociated,
    is_dissociated_signcomb,
    is_dissociated_subsetsum,
    is_maximal_dissociated,
)
from .one_span import covers, member, span
from .solvers import (
    DimensionReport,
    SearchBudget,
    full_report,
    lower_bound_log3,
    max_dissociated,
    min_maximal_dissociated,
    min_spanning_subset,
    min_spanning_universe,
)

__version__ = "0.1.0"
