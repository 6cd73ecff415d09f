"""Neutral-kaon pairs as open quantum systems: purity, entanglement, Bell-CHSH."""

from .bell import BellConfiguration, s_general, s_value
from .bipartite import (
    BipartiteEvolvedState,
    BipartitePurity,
    PureTwoKaonState,
    bell_state,
    evolve_bipartite,
    expectation_closed_form,
    expectation_matrix,
    left_marginal,
    named_state,
    purity_bipartite,
    right_marginal,
)
from .entanglement import (
    ConcurrenceResult,
    concurrence_closed_form,
    eof_from_concurrence,
    ppt_min_eigenvalue,
    wootters_concurrence,
)
from .exceptions import ConfigurationError, DomainError, KaonBellError
from .optimizer import (
    OptimizationResult,
    SearchSpace,
    maximize_s,
    maximize_s_fixed_state,
    random_time_scan,
)
from .params import MesonParameters, preset, preset_names
from .single_kaon import (
    EvolvedSingleState,
    QuasiSpin,
    SingleKaonInitial,
    evolve_single,
    expectation_single,
    integrate_master_equation,
    prob_yes,
    purity_minimum_time,
    purity_single,
)

__all__ = [
    "BellConfiguration",
    "BipartiteEvolvedState",
    "BipartitePurity",
    "ConcurrenceResult",
    "ConfigurationError",
    "DomainError",
    "EvolvedSingleState",
    "KaonBellError",
    "MesonParameters",
    "OptimizationResult",
    "PureTwoKaonState",
    "QuasiSpin",
    "SearchSpace",
    "SingleKaonInitial",
    "bell_state",
    "concurrence_closed_form",
    "eof_from_concurrence",
    "evolve_bipartite",
    "evolve_single",
    "expectation_closed_form",
    "expectation_matrix",
    "expectation_single",
    "integrate_master_equation",
    "left_marginal",
    "maximize_s",
    "maximize_s_fixed_state",
    "named_state",
    "ppt_min_eigenvalue",
    "preset",
    "preset_names",
    "prob_yes",
    "purity_bipartite",
    "purity_minimum_time",
    "purity_single",
    "random_time_scan",
    "right_marginal",
    "s_general",
    "s_value",
    "wootters_concurrence",
]
