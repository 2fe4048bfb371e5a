"""Numerical toolkit for Bell nonlocality: behaviors, polytopes, quantum bounds and diagnostics."""
__version__ = "0.1.0"
