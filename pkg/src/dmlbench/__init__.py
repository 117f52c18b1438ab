"""Return-set workbench for self-maps of algebraic tori over F_p(t)."""

__version__ = "0.1.0"
