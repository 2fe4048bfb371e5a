from .efficiency import (EberhardPoint, EfficiencyModel, apply_efficiency, chsh_relabelings,
                         eberhard_threshold, efficiency_lower_bound, efficiency_threshold)
from .randomness import (RandomnessBound, chsh_global_minentropy_max, gill_bound, guessing_bound_chained,
                         guessing_bound_ns, guessing_bound_quantum, min_entropy, randomness_bound,
                         teleport_fidelity_bound)
from .strength import StrengthResult, statistical_strength
