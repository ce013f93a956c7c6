"""Reduced-space two-level suffix array index."""
