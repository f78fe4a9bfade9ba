"""Range sums of polynomials over prime fields."""

__version__ = "0.1.0"
