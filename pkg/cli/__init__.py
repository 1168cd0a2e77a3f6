"""
Command-line experiment runner: configuration, result files and SVG plots.
"""
