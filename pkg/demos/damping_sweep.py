"""Sweeps over the second cavity's damping and the tunneling strength.

The adiabatic sweep is instant; the dynamic one integrates every point
(a few seconds each), so it uses a short grid. Pass a directory to keep
the CSVs.
"""
import sys
from pathlib import Path

import numpy as np

from mimcool.adiabatic import effective_params
from mimcool.harness import SweepAxis, SweepSpec, run_sweep
from mimcool.params import from_effective

out = Path(sys.argv[1]) if len(sys.argv) > 1 else None

# optimum damping: one interior minimum in kappa2/kappa1
spec = SweepSpec((SweepAxis("kappa2", 1.0, 50.0, 60, "log"),),
                 effective_params(1e-3, 5.0, 5.0), mode="adiabatic")
res = run_sweep(spec, output=out / "kappa2_adiabatic.csv" if out else None)
k = np.array([pt[0] for pt in spec.points()])
r = res.column("cooling_ratio")
i = int(np.argmin(r))
print(f"adiabatic, J_E=5: best kappa2/kappa1 = {k[i]:.2f}, ratio {r[i]:.4f}")

# tunneling at fixed drive, dynamic runs
spec = SweepSpec((SweepAxis("J", 0.0, 2.0, 3),), from_effective(1.0, kappa2=1.0), t_max=40.0)
res = run_sweep(spec, output=out / "J_dynamic.csv" if out else None)
for row in res.rows:
    print(f"J = {row['values'][0]:.1f}  ratio {row['cooling_ratio']:.2f}  converged {row['converged']}")
