"""Shared exception type.

Every anticipated failure in the library raises :class:`GPWError` so the
command-line layer can distinguish expected numerical/usage problems (exit
status 2) from genuine bugs.
"""


class GPWError(ValueError):
    """Raised for invalid inputs or degenerate numerical configurations."""
