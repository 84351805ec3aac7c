"""etlab: exact curvature and identity verification for Einstein-type manifolds."""

__version__ = "0.1.0"
