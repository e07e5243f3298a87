"""Pfaffian point processes for real asymmetric random-matrix ensembles."""

from .spectral import KernelBlock, SpectralPoint

__all__ = ["KernelBlock", "SpectralPoint"]

__version__ = "0.1.0"
