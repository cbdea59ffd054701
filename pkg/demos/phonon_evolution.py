"""Phonon number against time, two cavities vs one.

Effective drive J_E = (g/omega_m)(E/kappa1). At J_E = 1 an extra cavity
with kappa2 = 1.5 kappa1 cools further than the single-cavity setup; at
J_E = 2.5 equal damping in the second cavity makes things worse, while
kappa2 = 4 kappa1 helps again.

Each run is ~10 s on one core.
"""
from mimcool.covariance import simulate_cooling
from mimcool.params import from_effective, single_cavity

T_MAX = 60.0

for J_E, kappas in ((1.0, (1.5, 1.0)), (2.5, (4.0, 1.0))):
    base = from_effective(J_E, omega_m=100.0, gamma_m=1e-3, n_th=100.0)
    one = simulate_cooling(single_cavity(base), T_MAX)
    print(f"J_E = {J_E}")
    print(f"  single cavity      n_m = {one.n_m_final:.4f}  ratio {one.cooling_ratio:.3f}")
    for k2 in kappas:
        res = simulate_cooling(base.replace(kappa2=k2), T_MAX)
        flag = "" if res.converged else "  (not converged)"
        print(f"  MIM kappa2 = {k2:<4}  n_m = {res.n_m_final:.4f}  ratio {res.cooling_ratio:.3f}{flag}")

# the time series itself, coarsely
res = simulate_cooling(from_effective(1.0, kappa2=1.5), 20.0)
for t, n in zip(res.t[::400], res.n_m[::400]):
    print(f"t = {t:6.2f}   n_m = {n:9.4f}")
