"""Algebraic structure of the steady states, checked numerically.

Three exact relations hold on a detuning grid symmetric about delta_c = 0:

  * mirror relations -- the optical coherences at +delta_c determine their
    partners at -delta_c: rho42(+) = -conj(rho31(-)), rho32(+) = -conj(rho41(-));
  * Raman steady-state relations -- the ground (rho21) and excited (rho43)
    two-photon coherences are fixed linear combinations of the optical ones;
  * evenness -- both Raman coherence spectra are even in delta_c.

This script runs a sweep, evaluates all three, then deliberately corrupts one
grid point to show the checks actually detect violations.

Run:  python3 demos/raman_identities.py
"""

import hfs
from hfs.identities import (check_evenness, check_mirror_relations,
                            check_raman_steady_table, corrupt_coherence)
from hfs.sweep import SweepSpec, run_sweep

params = hfs.sodium_d1_cyclic_splittings()
omega = 5.0
spec = SweepSpec.paper_grid(params, count=401, span_delta_u=3.0,
                            omegas=(omega,))
table = run_sweep(params, spec)

reports = [
    check_mirror_relations(table, omega),
    check_raman_steady_table(params, table, omega),
    check_evenness(table, omega),
]
for rep in reports:
    status = "pass" if rep.passed else "FAIL"
    print(f"{status}  {rep.identity}: max residual {rep.max_residual:.3e} "
          f"over {rep.n_points} checks")

print("\nnow corrupting rho31 at one grid point ...")
bad = corrupt_coherence(table, "31", 250)
for rep in (check_mirror_relations(bad, omega),
            check_evenness(bad, omega)):
    status = "pass" if rep.passed else "FAIL"
    print(f"{status}  {rep.identity}: max residual {rep.max_residual:.3e}")
