"""Rigorous numerics for Lagrange/Markov-style dynamical spectra, regular
Cantor sets, and their model systems."""
from __future__ import annotations

__version__ = "0.1.0"
