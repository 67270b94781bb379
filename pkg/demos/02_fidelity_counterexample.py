"""Fidelity coherence can increase on average under an incoherent subselection."""

from qcoherence import axioms
from qcoherence.channels import subselect
from qcoherence.measures import c_fidelity

rho = axioms.paper_state()
channel = axioms.paper_channel()
print("rho =\n", rho.round(6))

for n, outcome in enumerate(subselect(channel, rho), start=1):
    cf = c_fidelity(outcome.state).value
    print(f"outcome {n}: p = {outcome.probability:.9f}, C_F = {cf:.9f}")

w = axioms.reproduce_counterexample()
print(f"\nC_F(rho)              = {w.report.lhs:.9f}")
print(f"sum_n p_n C_F(rho_n)  = {w.report.rhs:.9f}")
print("monotonicity on average holds:", w.report.passed)
