"""growthforms - exterior calculus of volumetric and surface growth."""

__version__ = "1.0.0"
