"""
Wave packet package.
This package contains modules for wave packet decompositions at scale R, tube geometry,
tangency of tubes to algebraic varieties and the broad norm.
"""
