"""Running the engines: search, symbolic runs, benchmark matrices, comparison."""
