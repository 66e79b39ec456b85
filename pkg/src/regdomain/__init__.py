"""Regular domains of affine deformations and their cosmological time."""

__version__ = "0.1.0"
