"""Randomised audit of the coherence-measure conditions on qubits."""

from qcoherence import Measure
from qcoherence.axioms import audit

for measure in Measure:
    s = audit(measure, dim=2, samples=300, seed=1)
    counts = ", ".join(f"{c}: {t.violations}/{t.checked}" for c, t in s.tallies.items())
    print(f"{measure.value:<17} {counts}  (expected failures: {s.known_violations})")
