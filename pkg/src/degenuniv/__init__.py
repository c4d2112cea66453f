"""Universal host graphs for graphs of bounded degeneracy.

A random block model host, a greedy sub-block embedder, guest generators
and the bound calculators used to check them at small scale.
"""

__version__ = "0.1.0"

from .analysis import (
    BoundsReport,
    bounds_report,
    chernoff_tail,
    estimate_common_event,
    expected_edges,
    lower_bound_edges,
    model_edge_bound,
    pseudo_random_diagnostic,
    universality_budget,
    wilson_interval,
)
from .blockmodel import BlockModelParams, HostGraph, audit_edges, derive_params, sample_host
from .embedder import (
    BackMultiset,
    EmbedOptions,
    EmbedResult,
    assert_ledger,
    assign_band,
    check_well_behaved,
    collect_back_multiset,
    common_candidates,
    embed,
    ledger,
)
from .errors import (
    DegenunivError,
    EdgeListError,
    InvariantBreach,
    PreconditionError,
    SizeOverflowError,
)
from .generators import (
    CorpusSpec,
    gen_bounded_degree_degenerate,
    gen_extremal,
    gen_random_degenerate,
    generate_corpus,
)
from .graph import (
    DegeneracyResult,
    Graph,
    degeneracy_order,
    degree_profile_check,
    max_degree,
    read_edge_list,
    verify_embedding,
    write_edge_list,
)
