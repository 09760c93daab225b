"""Exact arithmetic for d-codes among Hermitian matrices over F_{q^2}."""

__version__ = "0.1.0"
