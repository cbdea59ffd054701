"""Resolved-sideband cooling limits: closed forms vs Lyapunov solves.

Ratios are n_mf / (Gamma_m n_th); 1 is the single-cavity limit.
"""
import numpy as np

from mimcool.adiabatic import (argmin_kappa2, cooling_ratio_caseA, limit_caseB, limit_caseC,
                               lyapunov_ratio, optimal_kappa2_caseB, optimal_kappa2_caseC)

G = 1e-3

# Case A, kappa2 = kappa1: exact, and depends only on J_E1^2 + J_E2^2
print("case A")
for a, b in ((1, 1), (np.sqrt(2), 0), (3, 4), (5, 0)):
    print(f"  J_E=({a:.3f},{b:.3f})  closed {cooling_ratio_caseA(G, a, b):.6f}"
          f"  lyapunov {lyapunov_ratio(G, a, b):.6f}")

# Case B, equal drives, kappa2 free. The closed-form optimum is not where the
# steady state is smallest; both numbers are printed side by side.
print("case B")
for J in (5.0, 10.0, 33.0):
    k_pub = optimal_kappa2_caseB(G, J)
    k_num, r_num = argmin_kappa2(G, J, J)
    print(f"  J_E={J:4.0f}  formula k2 {k_pub:7.3f} limit {limit_caseB(J):.4f}"
          f" (lyapunov there {lyapunov_ratio(G, J, J, k_pub):.4f})"
          f" | argmin k2 {k_num:7.3f} ratio {r_num:.4f}")

# Case C: a stronger first drive makes the limit worse at fixed second drive
print("case C, J_E2 = 5")
for J1 in (0.0, 5.0, 10.0):
    k = optimal_kappa2_caseC(G, J1, 5.0)
    print(f"  J_E1={J1:4.1f}  closed {limit_caseC(J1, 5.0):.4f}"
          f"  lyapunov min {argmin_kappa2(G, J1, 5.0)[1]:.4f}"
          f"  lyapunov at k2={k:.2f}: {lyapunov_ratio(G, J1, 5.0, k):.4f}")
