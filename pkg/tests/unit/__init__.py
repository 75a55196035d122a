"""Unit tests for petrisynth."""
