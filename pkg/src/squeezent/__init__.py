"""Two-mode squeezed boson and fermion states: construction and entanglement checks."""

__version__ = "0.1.0"
