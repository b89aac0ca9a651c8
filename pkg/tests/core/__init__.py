# This file makes the 'core' directory within 'tests' a Python package.