"""
UPA channels and Kronecker PSK codebooks
========================================

Builds a single-path channel on an 8x8 planar array, shows its Kronecker
structure, and lists how many feedback bits a few codebook configurations
cost. Run with ``python demos/01_channel_and_codebooks.py``.
"""
from dataclasses import replace

import numpy as np

from kpcfeedback import (AngleOfDeparture, ChannelConfig, CodebookSpec, array_response,
                         empirical_correlation, feedback_bits, generate_channel,
                         phases_from_aod, steering_horizontal, steering_vertical,
                         verify_unitary_kron)

#%% Steering vectors and the vec() layout
cfg = ChannelConfig(m_th=8, m_tv=8)
aod = AngleOfDeparture(azimuth=np.pi / 3, elevation=np.pi / 3)
mu, upsilon = phases_from_aod(aod, cfg)
a = array_response(aod, cfg)
print(f"mu = {mu:.3f} rad, upsilon = {upsilon:.3f} rad")
print("array response == kron(vertical, horizontal):",
      np.allclose(a, np.kron(steering_vertical(upsilon, 8), steering_horizontal(mu, 8))))

#%% Spatial correlation shrinks with angular spread
for spread in (0.0, 0.1, 0.2, 0.4):
    rho = empirical_correlation(replace(cfg, i_mpc=20, angular_spread=spread), 2000)
    print(f"angular spread {spread:.1f} rad -> adjacent-antenna correlation {rho:.3f}")

#%% One multipath draw
h = generate_channel(replace(cfg, i_mpc=20, angular_spread=0.2), np.random.default_rng(0))
print(f"||h||^2 = {np.vdot(h, h).real:.1f} (expected {cfg.m_t} on average)")

#%% Feedback cost and the unitary Kronecker DFT subset
for n in (2, 4, 8):
    print(f"8x8 array, {n}-PSK factors: {feedback_bits(CodebookSpec(n, n, 8, 8))} bits")
print(f"|| U_K U_K^H - I ||_F for 8x8: {verify_unitary_kron(8, 8):.1e}")
