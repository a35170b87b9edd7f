"""nevlab: numerical value-distribution lab for explicit projective curves."""

__version__ = "0.1.0"
