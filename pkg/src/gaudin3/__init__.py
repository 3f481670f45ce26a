"""Three-point sl2 Gaudin model: exact Hamiltonians, spectral curves,
branch points, and monodromy groups."""

__version__ = "0.1.0"
