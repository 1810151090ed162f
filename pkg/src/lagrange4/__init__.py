"""Numerical companion to the circle-method and linear-sieve treatment of
x1^2 + x2^2 + x3^2 + x4^2 = N with x1 x2 x3 x4 + 1 an almost-prime."""

__version__ = "0.1.0"
