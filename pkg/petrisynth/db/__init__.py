"""SQLite store for bench run records."""
