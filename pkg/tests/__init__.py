"""Tests for petrisynth."""
