"""Scalable benchmark families."""

from petrisynth.benchmarks.catalog import (
    DEFAULT_CATALOG,
    BenchmarkSpec,
    CatalogEntry,
    Family,
    InvalidParameters,
    generate,
    list_catalog,
)

__all__ = [
    "DEFAULT_CATALOG",
    "BenchmarkSpec",
    "CatalogEntry",
    "Family",
    "InvalidParameters",
    "generate",
    "list_catalog",
]
