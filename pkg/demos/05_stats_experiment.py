"""Do protocol transmissions look like random augmentation-zero matrices?

Runs a small version of the frequency experiment and prints the Q-Q fit
and chi-square summary. Pass a trial count as the first argument.

Run: python3 demos/05_stats_experiment.py [trials]
"""

import sys

import numpy as np

from sdkx.statharness import ExperimentConfig, Mode, chi_square_distance, qq_data, qq_fit, run_experiment

trials = int(sys.argv[1]) if len(sys.argv) > 1 else 30
for mode in (Mode.POWER_VS_RANDOM, Mode.POWER_VS_SUMPOWER):
    a, b = run_experiment(ExperimentConfig(trial_count=trials, mode=mode, seed=5))
    fits = np.array([qq_fit(s) for s in qq_data(a, b)])
    chi = chi_square_distance(a, b)
    print(f"{mode.value}: {trials} trials")
    print(f"  Q-Q slopes in [{fits[:, 0].min():.3f}, {fits[:, 0].max():.3f}], min correlation {fits[:, 1].min():.5f}")
    print(f"  chi-square {chi.statistic:.1f} on {chi.dof} dof, p = {chi.p_value:.3f}, rejected at 0.01: {chi.rejected(0.01)}")
