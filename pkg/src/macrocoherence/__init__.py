"""Coherence, asymmetry and quantum-macroscopicity measures."""
__version__ = "0.1.0"
