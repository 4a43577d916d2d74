"""
turnkan - turn-intent classification with Kolmogorov-Arnold networks
"""

__version__ = "0.1.0"
