"""Step definitions package initialization."""

# This file makes the step_defs directory a Python package
# pytest-bdd will automatically discover step definitions in this directory
