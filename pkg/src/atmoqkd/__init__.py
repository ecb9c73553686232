"""Direct-beam atmospheric transmittance for free-space QKD link budgets.

The package computes the fraction of zenith sunlight (or any source at the
top of the atmosphere) that crosses a layered atmosphere without interacting,
on a uniform wavenumber grid, and turns band-averaged results into dB losses
and security verdicts.
"""

from atmoqkd.errors import (
    AtmoQKDError,
    ContractError,
    DomainError,
    FieldError,
    FormatError,
    ParseError,
    ValidationError,
)
from atmoqkd.spectra import SpectralGrid, SolarSpectrum, make_grid

__version__ = "0.1.0"

__all__ = [
    "AtmoQKDError",
    "ContractError",
    "DomainError",
    "FieldError",
    "FormatError",
    "ParseError",
    "ValidationError",
    "SpectralGrid",
    "SolarSpectrum",
    "make_grid",
]
