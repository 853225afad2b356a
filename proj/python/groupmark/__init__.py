"""Group-project mark allocation: simulation, marking schemes and error metrics."""

from ._groupmark import (
    Error,
    MarkResult,
    ParticipationMatrix,
    Population,
    assign_groups,
    bias_slope,
    error_summary,
    generate_population,
    group_marks,
    leading_eigenvector,
    mark,
    mark_adjusted_reflexive,
    normalised_peer_assessment,
    peer_ranking,
    pinv_solve,
    pseudoinverse_marking,
    ranking_matrix,
    reflexive_accounts,
    run_scenario,
    schemes,
    simulate_assessments,
    sopp,
)

__all__ = [name for name in dir() if not name.startswith("_")]
