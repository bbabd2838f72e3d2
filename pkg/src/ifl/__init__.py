"""Arithmetic of cubic fields, Iwasawa lambda-invariants and the
non-freeness criteria for the maximal unramified pro-p extension over the
cyclotomic Z_3-extension of an imaginary quadratic field."""

__version__ = "0.1.0"
