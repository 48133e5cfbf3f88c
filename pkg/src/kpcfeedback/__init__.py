"""Limited-feedback beamforming for 3D (FD-MIMO) channels.

Kronecker-product PSK codebooks quantized by two parallel noncoherent
sequence detections, with brute-force oracles and a Monte Carlo BER harness.
"""

__version__ = "0.1.0"

from .channel import (AngleOfDeparture, ChannelConfig, array_response, calibrate_spread,
                      empirical_correlation, generate_channel, phases_from_aod,
                      steering_horizontal, steering_vertical)
from .codebook import (CodebookSizeError, CodebookSpec, KpcBeamformer, PskCodeword, dft_codebook,
                       enumerate_kpc, feedback_bits, kron_beamformer, kron_dft_codebook, realize,
                       verify_unitary_kron)
from .linklevel import (BerRecord, SimConfig, coding_gain, qpsk_demodulate, qpsk_modulate,
                        run_sweep, run_trial)
from .quantizer import (DetectionResult, QuantizedCsi, beamforming_gain, decompose_channel,
                        exhaustive_kpc_search, exhaustive_psk_detect, ncsd_detect, quantize_csi)
