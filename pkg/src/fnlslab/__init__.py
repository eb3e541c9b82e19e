"""fnlslab: lattice fractional Schrodinger dynamics and its dispersive analysis."""

__version__ = "0.1.0"

from .lattice import (
    Grid,
    LatticeField,
    SpectralField,
    SymbolKind,
    SymbolSpec,
    apply_multiplier,
    forward_dft,
    inverse_dft,
    long_range_coeff,
    lp_norm,
    make_grid,
    sobolev_norm,
    symbol_value,
)

__all__ = [
    "__version__",
    "Grid",
    "LatticeField",
    "SpectralField",
    "SymbolKind",
    "SymbolSpec",
    "apply_multiplier",
    "forward_dft",
    "inverse_dft",
    "long_range_coeff",
    "lp_norm",
    "make_grid",
    "sobolev_norm",
    "symbol_value",
]
