"""Dispersion spectra: coexisting slow light with gain and fast light with
narrow absorption.

At intermediate drive (20 gamma) the outer optical line (3-1) develops a gain
window whose centre sits on a normal-dispersion slope (large positive group
index: slow light), while the 4-1 line keeps a narrow absorption feature at
line centre sitting on an anomalous slope (negative group index: fast light).
Both live in the same spectrum at the same intensity.

Run:  python3 demos/slow_fast_light.py
"""

import numpy as np

import hfs
from hfs.sweep import SweepSpec, run_sweep

params = hfs.sodium_d1_cyclic_splittings()

for omega in (5.0, 20.0):
    spec = SweepSpec.paper_grid(params, count=1201, span_delta_u=2.0,
                                omegas=(omega,))
    table = run_sweep(params, spec)
    dc = table.column("delta_c_over_delta_u", omega)
    print(f"\n=== omega = {omega:g} gamma ===")
    for tr in ("31", "41"):
        chi_im = table.column(f"chi{tr}_im", omega)
        ng = table.column(f"ng{tr}", omega)
        disp = table.column(f"dispersion_class_{tr}", omega)
        line = table.column(f"line_class_{tr}", omega)
        k_gain = int(np.argmin(chi_im))
        k_abs = int(np.argmax(chi_im))
        print(f"transition {tr}:")
        print(f"  strongest absorption: chi_im = {chi_im[k_abs]:+.3e} at "
              f"dc/du = {dc[k_abs]:+.3f} ({disp[k_abs]} dispersion, "
              f"n_g = {ng[k_abs]:+.3e})")
        if chi_im[k_gain] < 0:
            print(f"  strongest gain:       chi_im = {chi_im[k_gain]:+.3e} at "
                  f"dc/du = {dc[k_gain]:+.3f} ({disp[k_gain]} dispersion, "
                  f"n_g = {ng[k_gain]:+.3e})")
            n_gain = int(np.sum(line == "gain"))
            print(f"  gain window covers {n_gain} of {len(dc)} grid points")
        else:
            print("  no gain anywhere on the grid")
