"""
Iterative Filtering and the mask length
=======================================

Iterative Filtering replaces EMD's spline envelopes with a convolutional
moving average. The mask is a triangular weight vector (a uniform window
convolved with itself), so its DFT is nonnegative and one inner iteration
scales every circular mode k by (1 - gain_k): modes the mask averages away
survive into the component, modes it preserves are pushed to the
remainder.

The mask half-length is derived from the spacing of the signal's extrema,
scaled by xi. Integer xi values place the dominant oscillation at a zero
of the triangular mask's DFT, which is why raising xi to 3 (as in the
published runs on geophysical data) separates tones far more cleanly than
the 1.6 default.
"""

import numpy as np

from imfkit import (
    IFSettings,
    MaskLengthRule,
    Signal,
    iterative_filtering,
    make_mask,
    mask_gain,
    mask_length,
)

mask = make_mask(3)
print("mask l=3 weights:", np.round(mask.weights, 4))
print("mask DFT gains (n=32):", np.round(mask_gain(mask, 32), 3))

n = 4096
t = np.arange(n) / n
signal = Signal(np.sin(2 * np.pi * 2 * t) + np.sin(2 * np.pi * 40 * t), dt=1.0 / n)
fast = np.sin(2 * np.pi * 40 * t)
slow = np.sin(2 * np.pi * 2 * t)

for rule in (MaskLengthRule.AVE, MaskLengthRule.ALMOST_MIN):
    l = mask_length(signal, IFSettings(alpha=rule, xi=3.0))
    print(f"mask half-length under {rule.value}, xi=3: {l}")

for xi in (1.6, 3.0):
    cfg = IFSettings(n_imfs=4, xi=xi, alpha=MaskLengthRule.AVE)
    d = iterative_filtering(signal, cfg)
    r_fast = np.corrcoef(d.imfs[0].samples, fast)[0, 1]
    amp = np.abs(d.imfs[0].samples).max()
    print(
        f"xi={xi}: first IMF amplitude {amp:.4f}, correlation with 40 Hz "
        f"{r_fast:.3f}, inner iterations {d.meta[0].inner_iterations}"
    )
    if len(d.imfs) > 1:
        r_slow = max(
            np.corrcoef(imf.samples, slow)[0, 1] for imf in d.imfs[1:]
        )
        print(f"        best later-IMF correlation with 2 Hz: {r_slow:.3f}")
