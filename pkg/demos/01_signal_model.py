#!/usr/bin/env python3
"""Walk through the baseband signal model.

Shows the banded Toeplitz structure of the symbol matrix, checks it against
the definition-level convolution sum, and prints the noise power budget
derived from the dB link ratios.
"""

import numpy as np

from fdsic import (
    build_convolution_matrix,
    generate_symbols,
    resolve_noise,
    sample_channel,
    transmit,
)

# ---- known transmit symbols through a short channel --------------------
n, k, seed = 8, 3, 42
x = generate_symbols(n, "bpsk", seed)
h = sample_channel(k, seed)

print(f"symbols (n={n}, BPSK):", np.real(x.symbols).astype(int))
print(f"channel taps (k={k}):")
for i, tap in enumerate(h.taps, start=1):
    print(f"  h{i} = {tap.real:+.4f}{tap.imag:+.4f}j")

X = build_convolution_matrix(x, k)
print("\nconvolution matrix X (each column is the symbol stream, shifted down):")
print(np.real(X.entries).astype(int))

# ---- X h is the truncated linear convolution ----------------------------
full_conv = np.convolve(x.symbols, h.taps)[:n]
print("\nmax |X h - conv(x, h)| =", np.max(np.abs(X.entries @ h.taps - full_conv)))

# ---- noise budget: SIR and SNR in dB to per-sample variances ------------
# unit-energy symbols through k unit-variance taps carry average power k
noise = resolve_noise(sir_db=10, snr_db=20, si_power=k)
print("\nnoise budget at SIR=10 dB, SNR=20 dB:")
print(f"  si_power (received interference) : {noise.si_power}")
print(f"  sigma_d2 (desired signal in w)   : {noise.sigma_d2}")
print(f"  sigma_n2 (AWGN)                  : {noise.sigma_n2}")
print(f"  sigma_w2 (composite)             : {noise.sigma_w2}")

# ---- a received frame retains its exact noise draw ----------------------
frame = transmit(x, h, noise, seed, matrix=X)
check = frame.samples - X.entries @ h.taps - frame.noise_realization
print("\nframe reconstruction check, max |y - Xh - w| =", np.max(np.abs(check)))
print("received samples:")
for value in frame.samples:
    print(f"  {value.real:+.4f}{value.imag:+.4f}j")
