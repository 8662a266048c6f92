"""Exact engine for osculating spaces, inflection loci and Segre invariants
of projective scrolls over genus-1 curves."""

__version__ = "0.1.0"
