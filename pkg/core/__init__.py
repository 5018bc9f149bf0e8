"""Hadamard Sojourn — exact sojourn-time distributions of the Hadamard walk"""
__version__ = "0.1.0"
