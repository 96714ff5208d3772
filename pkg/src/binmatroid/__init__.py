"""Binary matroid toolkit: GF(2) rank oracles, minors, duality, connectivity
searches and the audits behind the good-element theorem."""

from __future__ import annotations

from .analysis import (
    AuditReport,
    CensusReport,
    TheoremReport,
    contraction_3conn_audit,
    four_cocircuit_audit,
    odd_cocircuit_audit,
    small_classification_check,
    spike_cocircuit_audit,
    theorem_verifier,
    triangle_census,
    triangle_union_cocircuit_audit,
)
from .connectivity import (
    SearchBudget,
    SearchIndeterminate,
    SeparationWitness,
    find_43_violator,
    find_4fans,
    find_separation,
    is_internally_4_connected,
    is_n_connected,
    is_sequential,
    lambda_,
)
from .constructions import (
    GraphSpec,
    catalog,
    complete_graph,
    generalized_parallel_connection,
    graphic,
    projective_geometry,
    section6,
    wheel_graph,
)
from .gf2core import BitMatrix, CapacityError, PreconditionError
from .io import parse_matroid, render_matroid
from .matroid import (
    BinaryMatroid,
    circuits,
    closure,
    cocircuits,
    coclosure,
    contract,
    corank,
    delete,
    dual,
    full_closure,
    is_isomorphic,
    rank,
    restrict,
    si_contract,
    simplify,
    triads,
    triangles,
)

__version__ = "0.1.0"
