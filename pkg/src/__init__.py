"""
gfiso - Gaussian-fermion channels and isometric tensor networks.
Steady states, entanglement spectra and topological checks at desk scale.
"""

__version__ = "0.1.0"
