"""Four coherence measures on a handful of qubit and qutrit states."""

import numpy as np

from qcoherence import Measure, evaluate, from_bloch, make_qutrit_class, random_state

states = {
    "|+>": from_bloch((1, 0, 0)),
    "mixed qubit": from_bloch((0.3, -0.4, 0.2)),
    "X-class qutrit": make_qutrit_class("X", (0.5, 0.2, 0.3), 0.15).to_density(),
    "random qutrit": random_state(3, 11),
}

print(f"{'state':<16}" + "".join(f"{m.value:>18}" for m in Measure))
for name, rho in states.items():
    row = [evaluate(rho, m) for m in Measure]
    print(f"{name:<16}" + "".join(f"{r.value:>18.9f}" for r in row))

# the trace and fidelity measures also return the closest incoherent state
res = evaluate(states["mixed qubit"], "fidelity")
print("\nclosest incoherent state in fidelity:", np.round(np.diag(res.argmin_state).real, 6),
      f"({res.method})")
