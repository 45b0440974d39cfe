"""Generalised Gardiner-Praeger (CPM) graphs and their symmetries."""

from .graphs import Params, Vertex, CpmGraph, build_component, build_full, build_px
from .modring import Residue

__all__ = ["Params", "Vertex", "CpmGraph", "build_component", "build_full", "build_px", "Residue"]
__version__ = "0.1.0"
