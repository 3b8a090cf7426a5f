"""Arbitrary-precision verification of central-binomial harmonic series identities."""

__version__ = "0.1.0"
