"""Super lambda-lengths on triangulated polygons: symbolic super T-path
expansions, a numeric super Ptolemy flip engine, and super-friezes."""

__version__ = "0.1.0"
