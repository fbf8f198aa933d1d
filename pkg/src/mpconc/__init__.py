"""Multipartite concurrence for pure states and lower bounds for mixed states."""

from .bounds import (
    BoundReport,
    bipartite_lower_bound,
    corollary1_bound,
    delta_bound,
    partition_bound,
    scheme_bound,
    substate_mixed,
    theorem1_bound,
    theorem2_bound,
    tripartition_bound_relation,
    wootters_concurrence,
)
from .concurrence import (
    ConcurrenceValue,
    concurrence_224_coefficient,
    concurrence_full,
    concurrence_partition,
    substate_pure,
)
from .partitions import (
    Partition,
    WeightScheme,
    compose_weights,
    enumerate_partitions,
    realized_subsets,
    theorem1_scheme,
    verify_weights,
)
from .qstate import (
    DensityMatrix,
    PureState,
    StateError,
    partial_trace,
    partial_transpose,
    purity,
    random_pure,
    realign,
    trace_norm,
)

__version__ = "0.1.0"
