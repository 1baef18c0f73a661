"""
Tropical toolkit - exact max-plus algebra, tropical convexity and curve calculus.
"""

__version__ = "1.0.0"
__author__ = "Tropical Toolkit Team"
