from .types import BellExpression, Behavior, Bound, Correlators, Game, Scenario
from .transforms import (
    ValidationReport, cg_dimension, cg_labels, cg_matrices, chsh_game, correlator_term, correlators_of,
    deterministic_behavior, evaluate, from_collins_gisin, from_correlators, full_correlator,
    game_to_expression, lift_merge_outcome, no_signaling_residual, parity_tensor, pr_box,
    product_behavior, random_ns_behavior, to_collins_gisin, uniform_behavior, validate_behavior,
    winning_probability, xor_game,
)
from .catalog import catalog, catalog_names, chained, cglmp, chsh, cluster4, i3322, mermin, svetlichny

__all__ = [name for name in dir() if not name.startswith("_")]
