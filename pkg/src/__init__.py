"""
自旋测量指针在气体热库中的退相干
"""

__version__ = '0.1.0'
__author__ = 'Decoherence Team'
