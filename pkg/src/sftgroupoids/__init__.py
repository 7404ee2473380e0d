"""Exact computations with the asymptotic groupoids of two-sided shifts of
finite type, including verification of orbit equivalence data.  All points
are eventually periodic."""

__version__ = "0.1.0"
