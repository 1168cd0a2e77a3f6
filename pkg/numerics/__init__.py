"""
Shared numerical helpers.
This package holds the error types, sphere quadrature rules, power-law fitting and
seeded random streams used by every experiment package.
"""
