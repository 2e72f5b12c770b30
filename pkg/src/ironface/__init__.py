"""Face (IRF) six-vertex toolkit: weights, operators, spectra, Bethe ansatz and NLIE thermodynamics."""

__version__ = "0.1.0"
