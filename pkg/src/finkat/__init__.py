"""Finite-category computation engine: essential monomorphisms, localizations,
spectral categories and injective envelopes, checked by exhaustive search."""

__version__ = "0.1.0"
