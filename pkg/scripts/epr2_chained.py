"""Local content of singlet correlations under optimal chained-inequality settings (CSV)."""
import argparse

from bellscope.core import chained, evaluate
from bellscope.quantum import born_behavior, seesaw_lower_bound
from bellscope.simulate import epr2_local_content, epr2_upper_from_inequality

ap = argparse.ArgumentParser()
ap.add_argument("--m-max", type=int, default=6)
ap.add_argument("--restarts", type=int, default=5)
args = ap.parse_args()

print("m,chained_value,w_max_lp,upper_from_inequality")
for m in range(2, args.m_max + 1):
    e = chained(2, m)
    r = seesaw_lower_bound(e, (2, 2), restarts=args.restarts, seed=m)
    b = born_behavior(r.model)
    print(f"{m},{evaluate(e, b):.8f},{epr2_local_content(b):.8f},{epr2_upper_from_inequality(b, e):.8f}", flush=True)
