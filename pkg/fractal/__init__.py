"""
Fractal measures package.
This package contains modules for self-similar atomic measures, their Fourier transforms,
spherical-average decay fits, energies and truncated Mattila integrals.
"""
