"""
Checking the closed forms
=========================

The branch sum averages exact unitary steps with Poisson weights, and the
Fock oracle evolves a truncated density matrix.  Both should reproduce the
closed forms to within their truncation budgets.
"""

import numpy as np

from atomlaser import ModelParams, validate_params
from atomlaser.scans import run_verify

p = validate_params(ModelParams(omega=0.1, omega_prime=np.pi, gamma=100.0, r=0.3))
report = run_verify(p, np.linspace(0, 10, 25))
print(report.format())

# r = 2 is far too wide for n_max = 24; only the branch sum runs there
report = run_verify(p.with_(r=2.0), np.linspace(0, 2, 10))
print(report.format())
