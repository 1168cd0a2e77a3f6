"""
Extension operator package.
This package contains modules for frequency profiles, the paraboloid and sphere extension
operators, weighted norms of their fields, parabolic rescaling and R-scaling experiments.
"""
