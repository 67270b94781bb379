"""Where the violation lives: sweep r_z and locate the crossing point."""

import sys

from qcoherence import axioms

rows = axioms.sweep_rz(steps=41)
for row in rows[::4]:
    flag = "violated" if row.total_avg > row.c_f_rho else ""
    print(f"rz = {row.rz:+.4f}   C_F(rho) = {row.c_f_rho:.6f}   avg = {row.total_avg:.6f}  {flag}")

print(f"\ncrossing at rz* = {axioms.find_intersection():.9f}")

if len(sys.argv) > 1:
    axioms.write_sweep_csv(axioms.sweep_rz(steps=500), sys.argv[1])
    print("full sweep written to", sys.argv[1])
