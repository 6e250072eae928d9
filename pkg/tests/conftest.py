import numpy as np

from ia_lab.channels import ChannelSet


def identity_channels(K=3, F=3):
    """All-ones scalar links; violates slot distinctness on purpose."""
    coeffs = np.ones((K, K, F, 1, 1), dtype=complex)
    return ChannelSet(K=K, M=1, F=F, a_min=1.0, a_max=1.0, seed=0, coeffs=coeffs)
