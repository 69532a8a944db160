"""Mahler measures of x + 1/x + y + 1/y + k at CM points, their L-value
identities, and regulator checks for E_k over real quadratic fields."""

__version__ = "0.1.0"
