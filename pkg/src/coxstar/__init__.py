"""Word problem, automorphisms and diagram moves for star-shaped Coxeter groups."""

__version__ = "0.1.0"
