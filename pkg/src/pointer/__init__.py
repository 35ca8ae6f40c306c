"""
自由指针模块
"""

from .free_evolution import (
    ComplexSpread,
    FreeProbability,
    complex_spread,
    free_density_kp,
    free_density_matrix,
    free_probability,
    free_spread,
    free_wavepacket,
    initial_wavepacket,
    interference_frequency,
)

__all__ = [
    'ComplexSpread',
    'FreeProbability',
    'complex_spread',
    'free_density_kp',
    'free_density_matrix',
    'free_probability',
    'free_spread',
    'free_wavepacket',
    'initial_wavepacket',
    'interference_frequency',
]
