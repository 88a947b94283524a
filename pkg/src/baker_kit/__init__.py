"""Certified Baker-method toolkit for N_m = F_n F_k."""

__version__ = "0.1.0"
