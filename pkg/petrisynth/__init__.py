"""petrisynth - winning-strategy synthesis for safe Petri games."""

__version__ = "0.1.0"
