#!/usr/bin/env python3
"""How many symbols buy sub-noise cancellation?

The predicted residual power k * sigma_w2 / n falls below the AWGN floor
sigma_n2 once n exceeds n0 = floor(k * sigma_w2 / sigma_n2) + 1.  This
script tabulates n0 across channel lengths and link ratios, then verifies
the crossing by Monte Carlo at the default operating point.
"""

from fdsic import (
    SweepConfig,
    find_threshold_n0,
    noise_for_taps,
    predicted_residual_power,
    run_rsi_sweep,
)

# ---- threshold versus channel length -------------------------------------
print("threshold n0 at SIR=10 dB, SNR=20 dB:")
print(f"{'k':>4} {'sigma_w2':>10} {'sigma_n2':>10} {'n0':>8}")
for k in (1, 5, 10, 20, 40, 80):
    noise = noise_for_taps(k, 10.0, 20.0)
    n0 = find_threshold_n0(k, noise.sigma_w2, noise.sigma_n2)
    print(f"{k:>4} {noise.sigma_w2:>10.4f} {noise.sigma_n2:>10.4f} {n0:>8}")
print("longer channels need proportionally longer frames.")

# ---- threshold versus link quality ---------------------------------------
print("\nthreshold n0 at k=20 across SNR (SIR fixed at 10 dB):")
print(f"{'snr_db':>7} {'n0':>8}")
for snr_db in (10, 15, 20, 25, 30):
    noise = noise_for_taps(20, 10.0, snr_db)
    print(f"{snr_db:>7} {find_threshold_n0(20, noise.sigma_w2, noise.sigma_n2):>8}")
print("cleaner links set a lower floor, so sub-noise operation costs more symbols.")

# ---- the crossing itself, analytically and by simulation ------------------
k = 20
noise = noise_for_taps(k, 10.0, 20.0)
n0 = find_threshold_n0(k, noise.sigma_w2, noise.sigma_n2)
print(f"\nat k={k}: n0 = {n0}")
for n in (n0 - 1, n0):
    power = predicted_residual_power(k, noise.sigma_w2, n)
    relation = "<" if power < noise.sigma_n2 else ">="
    print(f"  predicted power at n={n}: {power:.6f} {relation} floor {noise.sigma_n2}")

cfg = SweepConfig(n_values=(1000, 2021, 4000), k_values=(k,), trials=400, master_seed=11)
rows = run_rsi_sweep(cfg)
print(f"\nMonte Carlo check ({cfg.trials} trials per cell):")
for row in rows:
    marker = "below" if row.metric_mean < row.noise_floor else "above"
    print(f"  n={row.n:>5}: mean residual power {row.metric_mean:.5f} ({marker} floor)")
print("\nright at n0 the predicted margin under the floor is only 0.05%, so a")
print("finite-trial mean can land on either side; well past it the power is")
print("unambiguously below.")
