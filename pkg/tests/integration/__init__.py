"""Integration tests for petrisynth.

End-to-end engine and CLI runs on generated benchmarks.
"""
