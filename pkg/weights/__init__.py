"""
Weights package.
This package contains modules for building nonnegative weights on sampled boxes and
certifying the ball-growth condition int_{B(x, r)} H <= C r^alpha on sampled balls.
"""
