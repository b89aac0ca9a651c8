# This file makes the 'core' directory a Python package.

# Users of the package import specific modules, e.g.:
# from core.hedgehog import polygon_hedgehog
# from core.perturbation_engine import increase_hull_vertices
