"""
Sensitivity to the coupling
===========================

At omega' == omega the output beam stays squeezed for ever.  Moving omega'
by 1e-7 leaves the curve unchanged for a long time, then the surviving
envelope turns and the squeezing is gone.
"""

import numpy as np
import matplotlib.pyplot as plt

from atomlaser import ModelParams, validate_params
from atomlaser.scans import FIG5_DELTAS, sensitivity_columns

base = validate_params(ModelParams(omega=10.0, omega_prime=10.0, gamma=100.0, r=0.4))
t, cols = sensitivity_columns(base, FIG5_DELTAS, np.geomspace(1e-2, 1e8, 2000))

for label, y in cols.items():
    plt.semilogx(t, y, label=label)
plt.xlabel("t")
plt.ylabel("S2(b)")
plt.legend()
plt.savefig("sensitivity.png", dpi=120)

delta = 1e-7
_, peak = sensitivity_columns(base, [delta], [np.pi / (2 * delta)])
print("settled (delta = 0):", cols["s2_b_delta_0"][-1])
print("at t = pi / (2 delta):", peak["s2_b_delta_1e-07"][0])
