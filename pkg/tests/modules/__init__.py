# This file makes the 'modules' directory within 'tests' a Python package.