from .states import (DensityMatrix, ghz, hardy_amplitudes, hardy_state, isotropic, isotropic_table,
                     max_entangled, maximally_mixed, partial_transpose, partially_entangled, pure,
                     random_density, random_pure, reduced, singlet, werner_2q, werner_d, werner_table)
from .measurements import (PAULI, I2, X, Y, Z, QuantumModel, bell_operator, bloch_observable, born_behavior,
                           model_from_json, model_to_json, model_value, observable_projectors,
                           observables_of, operator_norm_bound, qubit_measurement, singlet_chsh_model)
from .seesaw import SeesawConfig, SeesawResult, restart_seeds, seesaw_lower_bound
from .criteria import chsh_horodecki, correlation_tensor, local_filter, schmidt_filter
from .paradoxes import (GHZ_RELATIONS, ghz_model, ghz_paradox_check, hardy_check,
                        hardy_model, hardy_optimum, monogamy_chsh, random_observable)
from .graphs import (CLUSTER_RELATIONS, Graph, cluster4_state, cluster_paradox_assignments, graph_model,
                     graph_state, l_of_g, stabilizer_bell_expression, stabilizer_group)
