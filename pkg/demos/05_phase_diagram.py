"""
Thresholds and a finite-size phase diagram
==========================================

As d and N grow with d/N -> delta and k/d -> rho, the expected fraction of
(k+1)-subsets that span faces tends to 1 below the weak threshold and to 0
above it. We tabulate the thresholds and watch the exact ratio sharpen.
"""

from galelab import expected_fk_ratio, phase_dims, rho_strong, rho_weak

for delta in (0.6, 0.75, 0.9):
    print(f"delta={delta}: rho_S={rho_strong(delta):.6f} rho_W={rho_weak(delta):.6f}")

delta = 0.75
for rho in (0.5, 0.9):
    ratios = []
    for d in (20, 40, 80, 160):
        dims = phase_dims(delta, rho, d)
        ratios.append(float(expected_fk_ratio(dims)))
    print(f"rho={rho}: " + ", ".join(f"{x:.4g}" for x in ratios))

# the full grid is one command away:
#   galelab phase-diagram --delta-grid 0.55:0.95:20 --rho-grid 0.025:0.975:20 \
#       --d 200 --exact-only --out grid.csv
