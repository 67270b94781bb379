"""For X/Y/Z-class qutrits the dephased state is the closest incoherent state in trace norm.

A blind simplex search finds the minimum; it should land on diag(rho)
with value 2|off-diagonal|.
"""

import numpy as np

from qcoherence.axioms import verify_class_theorem
from qcoherence.measures import brute_force_min
from qcoherence.states import make_qutrit_class

s = make_qutrit_class("Y", (0.4, 0.35, 0.25), 0.2 + 0.1j)
res = brute_force_min(s.to_density(), "trace", 150)
print("expected value:", 2 * abs(s.off_diagonal))
print("search value:  ", res.value)
print("argmin diag:   ", np.round(np.diag(res.argmin_state).real, 8), "vs", s.diagonal)

for tag in "XYZ":
    summary = verify_class_theorem(tag, samples=20, seed=0)
    print(f"class {tag}: value dev {summary.max_value_deviation:.1e}, "
          f"argmin dev {summary.max_argmin_deviation:.1e}, passed={summary.passed}")
