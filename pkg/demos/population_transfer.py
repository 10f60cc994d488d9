"""Steady-state population transfer between hyperfine partner states.

Sweeps the recentred detuning at four drive strengths and prints where the
ground-state imbalance W_g = rho22 - rho11 peaks.  At weak drive the transfer
is nearly complete and sits at delta_c ~ +/- delta_u (the two outer optical
lines); at intermediate drive the excited-state imbalance W_e takes over, and
at strong drive everything flattens out.

Run:  python3 demos/population_transfer.py
"""

import numpy as np

import hfs
from hfs.sweep import SweepSpec, run_sweep, summarize

params = hfs.sodium_d1_cyclic_splittings()
print(f"delta_g = {params.delta_g:.3f} gamma, "
      f"delta_e = {params.delta_e:.3f} gamma, "
      f"delta_u = {params.delta_u:.3f} gamma")

spec = SweepSpec.paper_grid(params, count=801, span_delta_u=2.5,
                            omegas=(0.5, 5.0, 20.0, 100.0))
table = run_sweep(params, spec)
report = summarize(table)

print()
print(f"{'omega/gamma':>12} {'max W_g':>10} {'at dc/du':>9} "
      f"{'max |W_e|':>10} {'at dc/du':>9}")
for om in spec.omegas:
    entry = report[om]
    we = table.column("w_e", om)
    dc = table.column("delta_c_over_delta_u", om)
    k = int(np.argmax(np.abs(we)))
    print(f"{om:>12g} {entry['w_g_max']['value']:>10.4f} "
          f"{entry['w_g_max']['delta_c_over_delta_u']:>9.3f} "
          f"{abs(we[k]):>10.4f} {dc[k]:>9.3f}")

print()
print("ASCII profile of W_g at omega = 0.5 gamma:")
dc = table.column("delta_c_over_delta_u", 0.5)
wg = table.column("w_g", 0.5)
for k in range(0, len(dc), 40):
    bar_len = int(round(abs(wg[k]) * 30))
    bar = ("+" if wg[k] >= 0 else "-") * bar_len
    print(f"  dc/du = {dc[k]:+6.2f}  {wg[k]:+7.3f}  {bar}")
