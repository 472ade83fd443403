"""
Number statistics and squeezing of the output beam
==================================================

Mandel Q of both modes, then the squeezing coefficient of the output atoms
for slow and fast decoherence.
"""

import numpy as np
import matplotlib.pyplot as plt

from atomlaser.scans import PRESETS, figure_columns

fig, axes = plt.subplots(2, 2, figsize=(10, 7))
for ax, key in zip(axes.flat, ["fig1", "fig2", "fig3", "fig4"]):
    preset = PRESETS[key]
    t, cols = figure_columns(preset)
    for label, y in cols.items():
        ax.plot(t, y, label=label)
    ax.set_xlabel("t")
    ax.set_ylabel(preset.observable)
    ax.legend(fontsize=7)

# With omega' == omega one envelope never decays, so S2(b) stays negative.
t, cols = figure_columns(PRESETS["fig4"], np.linspace(10, 20, 5))
print("S2(b), omega' = omega:", cols["s2_b_gamma_100"])

plt.tight_layout()
plt.savefig("figures.png", dpi=120)
