"""
tensor-extremal

Exact searches and checkable bounds for pattern avoidance in t-dimensional 0-1 matrices.
"""

__version__ = "0.1.0"
