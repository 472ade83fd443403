"""
Timescales for a realistic condensate
=====================================

How fast the Rabi exchange freezes and how long the squeezing lives, for
the experimental numbers, read as angular and as ordinary frequencies.
"""

import numpy as np
import matplotlib.pyplot as plt

from atomlaser.scans import scenario_experiment

t, cols, summary = scenario_experiment(np.geomspace(1e-7, 1.0, 800))
print(summary.format())

fig, ax = plt.subplots()
ax.semilogx(t, cols["n_b"], label="n_b")
ax.semilogx(t, cols["s2_b"], label="S2(b)")
ax.axvline(summary.freeze_angular_s, color="k", ls=":")
ax.set_xlabel("t [s]")
ax.legend()
plt.savefig("scenario.png", dpi=120)
