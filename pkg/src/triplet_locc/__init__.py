"""Conclusive local identification of three pure multipartite states.

Decides which members of a linearly independent triple can be identified
with certainty by local operations and classical communication, builds the
product-state witnesses that prove it, and simulates the resulting protocol.

    >>> from triplet_locc import StateSet, classify
    >>> S = StateSet.from_amplitudes([2, 2], [[1, 0, 0, 1], [1, 0, 0, -1], [0, 1, 1, 0]])
    >>> classify(S, rng=0).set_verdict.value
    'conclusively_locally_distinguishable'
"""
__version__ = "0.1.0"

from .errors import (
    DimensionError,
    InternalContradiction,
    LoccError,
    PreconditionError,
    RankError,
    SearchFailure,
    ZeroVectorError,
)
from .oracle import OracleKind, OracleVerdict, enumerate_witnesses_2x2, random_search_witness
from .protocol import (
    LocalBasisSet,
    ProtocolRunSummary,
    complete_local_bases,
    run_protocol,
    simulate_shot,
)
from .statecore import (
    MultipartiteState,
    PartySignature,
    ProductState,
    StateSet,
    basis_state,
    condition_on,
    embed,
    inner,
    is_product_across,
    make_product,
    make_state,
    merge_parties,
)
from .subspace import (
    PlaneKind,
    PlaneProductResult,
    gram,
    linearly_independent,
    nullspace_two_rows,
    orthogonal_complement,
    product_states_in_plane,
)
from .witness import (
    ClassificationReport,
    SetVerdict,
    StateVerdict,
    VerdictKind,
    Witness,
    classify,
    maximize_success,
    verify_witness,
    witness_highdim,
    witness_multiqubit,
    witness_two_qubit,
)

__all__ = [
    "ClassificationReport",
    "DimensionError",
    "InternalContradiction",
    "LocalBasisSet",
    "LoccError",
    "MultipartiteState",
    "OracleKind",
    "OracleVerdict",
    "PartySignature",
    "PlaneKind",
    "PlaneProductResult",
    "PreconditionError",
    "ProductState",
    "ProtocolRunSummary",
    "RankError",
    "SearchFailure",
    "SetVerdict",
    "StateSet",
    "StateVerdict",
    "VerdictKind",
    "Witness",
    "ZeroVectorError",
    "basis_state",
    "classify",
    "complete_local_bases",
    "condition_on",
    "embed",
    "enumerate_witnesses_2x2",
    "gram",
    "inner",
    "is_product_across",
    "linearly_independent",
    "make_product",
    "make_state",
    "maximize_success",
    "merge_parties",
    "nullspace_two_rows",
    "orthogonal_complement",
    "product_states_in_plane",
    "random_search_witness",
    "run_protocol",
    "simulate_shot",
    "verify_witness",
    "witness_highdim",
    "witness_multiqubit",
    "witness_two_qubit",
]
