"""Print the quantitative landmarks the package reproduces, one line each."""
import numpy as np

from bellscope.core import catalog, chsh, evaluate, i3322, mermin, pr_box, svetlichny
from bellscope.diagnostics import (chsh_global_minentropy_max, efficiency_threshold, guessing_bound_ns,
                                   guessing_bound_quantum, statistical_strength)
from bellscope.npa import npa_upper_bound
from bellscope.polytopes import local_bound, ns_bound, svetlichny_bound
from bellscope.quantum import (born_behavior, ghz_model, hardy_optimum, seesaw_lower_bound, singlet_chsh_model,
                               werner_2q, chsh_horodecki)

tb = born_behavior(singlet_chsh_model())
rows = [
    ("CHSH local / NS", f"{local_bound(chsh()):.6g} / {ns_bound(chsh()):.6g}"),
    ("CHSH NPA level 1", f"{npa_upper_bound(chsh()):.10f}  (2 sqrt2 = {2 * np.sqrt(2):.10f})"),
    ("CHSH see-saw", f"{seesaw_lower_bound(chsh(), (2, 2), restarts=5).value:.10f}"),
    ("I3322 qubit see-saw / NPA 1+AB", f"{seesaw_lower_bound(i3322(), (2, 2), restarts=10).value:.6f} / "
                                       f"{npa_upper_bound(i3322(), '1+AB'):.6f}"),
    ("Werner p = 1/sqrt2 Horodecki CHSH", f"{chsh_horodecki(werner_2q(1 / np.sqrt(2))):.10f}"),
    ("Mermin on GHZ", f"{-evaluate(mermin(), born_behavior(ghz_model())):.10f}"),
    ("Svetlichny hybrid bound / GHZ see-saw", f"{svetlichny_bound(svetlichny(3)):.6g} / "
                                             f"{seesaw_lower_bound(svetlichny(3), (2, 2, 2), restarts=5).value:.8f}"),
    ("Hardy optimum (theta, p)", "{:.6f}, {:.8f}".format(*hardy_optimum())),
    ("eta* Tsirelson behavior", "[{:.8f}, {:.8f}]".format(*efficiency_threshold(tb, (0, 0)))),
    ("eta* PR box", "[{:.8f}, {:.8f}]".format(*efficiency_threshold(pr_box(), (0, 0)))),
    ("p_guess quantum / NS at 2 sqrt2", f"{guessing_bound_quantum(2 * np.sqrt(2)):.6f} / "
                                        f"{guessing_bound_ns(2 * np.sqrt(2)):.6f}"),
    ("global min-entropy at 2 sqrt2", f"{chsh_global_minentropy_max().h_min:.6f} bits"),
    ("KL strength CHSH / Mermin-GHZ", f"{statistical_strength(tb).value:.6f} / "
                                      f"{statistical_strength(born_behavior(ghz_model())).value:.6f} bits"),
    ("cluster4 local bound", f"{local_bound(catalog('cluster4')):.6g}"),
]
w = max(len(k) for k, _ in rows)
for k, v in rows:
    print(f"{k:<{w}}  {v}")
