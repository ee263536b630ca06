"""Exact sparse algebra for entanglement structures on hypergraphs: restrictions, degenerations, obstructions and contraction."""
__version__ = "0.1.0"
