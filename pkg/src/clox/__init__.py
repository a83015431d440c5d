"""Numerics for the C_lambda-extended oscillator and its coherent states."""

__version__ = "0.1.0"
